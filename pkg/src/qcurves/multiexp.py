"""Simultaneous multiplication [a]P + [b]Q and the endomorphism-accelerated [m]P."""

from __future__ import annotations

from functools import lru_cache
from typing import Optional

from .curve import CurveMismatchError, OpCounter, Point, add, double, scalar_mul
from .decomp import build_basis, decompose
from .families import FamilyCurve, psi


class SubgroupError(ValueError):
    """The point is not killed by [N]."""


def straus(P: Point, Q: Point, a: int, b: int, counter: Optional[OpCounter] = None, width: int = 1) -> Point:
    """[a]P + [b]Q with one shared doubling chain.

    The table holds i*P + j*Q for 0 <= i, j < 2^width; with the default
    width 1 that is {O, P, Q, P+Q} and the loop does exactly
    bitlength(max(|a|, |b|)) doublings.
    """
    if P.curve is not Q.curve and P.curve != Q.curve:
        raise CurveMismatchError("straus needs both points on one curve")
    if width < 1:
        raise ValueError("width must be positive")
    if a < 0:
        P, a = -P, -a
    if b < 0:
        Q, b = -Q, -b
    k = 1 << width
    # precomputation is not counted; it is a fixed cost independent of the scalar
    row = [P.curve.infinity]
    for _ in range(k - 1):
        row.append(row[-1] + P)
    table = [row]
    for _ in range(k - 1):
        table.append([R + Q for R in table[-1]])
    n = max(a.bit_length(), b.bit_length())
    digits = (n + width - 1) // width
    mask = k - 1
    R = P.curve.infinity
    for i in range(digits - 1, -1, -1):
        for _ in range(width):
            R = double(R, counter)
        shift = i * width
        T = table[(b >> shift) & mask][(a >> shift) & mask]
        if T.x is not None:
            R = add(R, T, counter)
    return R


@lru_cache(maxsize=64)
def _basis_for(F: FamilyCurve, params):
    # params is part of the key: FamilyCurve equality ignores it
    return build_basis(F)


def mul_with_endo(F: FamilyCurve, P: Point, m: int, counter: Optional[OpCounter] = None, check: bool = True, width: int = 1) -> Point:
    """[m]P = [a]P + [b]psi(P) for P in the order-N subgroup."""
    if F.params is None:
        raise ValueError("family curve has no EndoParams")
    if check and scalar_mul(P, F.params.N).x is not None:
        raise SubgroupError("[N]P is not the point at infinity")
    dec = decompose(m, _basis_for(F, F.params))
    return straus(P, psi(F, P, counter), dec.a, dec.b, counter, width)
