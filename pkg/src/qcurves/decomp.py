"""Two-dimensional scalar decomposition m = a + b*lambda (mod N).

The lattice {(a, b) : a + b*lambda = 0 mod N} contains the short vectors
e1 = (1 + eps*p, -r) and e2 = (-eps*d*r, 1 + eps*p), whose determinant is
#E. Babai rounding in that basis gives |a|, |b| <= p + 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Tuple

from .families import FamilyCurve, InconsistencyError

Pair = Tuple[int, int]


class InvalidBasisError(ValueError):
    pass


class Decomposition(NamedTuple):
    a: int
    b: int


def round_half_up(num: int, den: int) -> int:
    """Nearest integer to num/den, ties toward +infinity; exact."""
    if den < 0:
        num, den = -num, -den
    return (2 * num + den) // (2 * den)


@dataclass(frozen=True)
class DecompBasis:
    e1: Pair
    e2: Pair
    N: int
    lam: int
    full_order: int
    eps: int
    d: int
    r: int
    p: int

    def __post_init__(self):
        for v in (self.e1, self.e2):
            if (v[0] + v[1] * self.lam) % self.N:
                raise InconsistencyError(f"{v} is not in the lattice of lambda mod N")
        if abs(self.det) != self.full_order:
            raise InconsistencyError(f"|det| = {abs(self.det)} differs from #E = {self.full_order}")

    @property
    def det(self) -> int:
        return self.e1[0] * self.e2[1] - self.e1[1] * self.e2[0]


def build_basis(F: FamilyCurve) -> DecompBasis:
    """Short basis for a family curve carrying EndoParams."""
    P = F.params
    if P is None:
        raise ValueError("family curve has no EndoParams; run endo_params first")
    eps, p, r, d = F.eps, F.p, P.r, F.d
    q = 1 + eps * p
    return DecompBasis((q, -r), (-eps * d * r, q), P.N, P.lam, P.order, eps, d, r, p)


def babai_round(m: int, e1: Pair, e2: Pair) -> Decomposition:
    """(m, 0) minus the nearest lattice point in the basis (e1, e2)."""
    det = e1[0] * e2[1] - e1[1] * e2[0]
    if det == 0:
        raise InvalidBasisError("basis vectors are linearly dependent")
    # (m, 0) = alpha*e1 + beta*e2
    ra = round_half_up(m * e2[1], det)
    rb = round_half_up(-m * e1[1], det)
    return Decomposition(m - ra * e1[0] - rb * e2[0], -ra * e1[1] - rb * e2[1])


def decompose(m: int, B: DecompBasis) -> Decomposition:
    """Closed-form rounding in the canonical basis; m is taken mod N."""
    m %= B.N
    if m == 0:
        return Decomposition(0, 0)
    q = 1 + B.eps * B.p
    n = B.full_order
    u = round_half_up(m * q, n)
    v = round_half_up(m * B.r, n)
    return Decomposition(m - u * q + v * B.eps * B.d * B.r, u * B.r - v * q)
