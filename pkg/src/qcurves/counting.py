"""Group orders without SEA.

Exhaustive counting for tiny p, baby-step giant-step recovery of r from the
characteristic relation psi^2 - [eps*d*r] psi + [d*p] = 0, probabilistic
certificate checks for cryptographic sizes, and the j-invariant census.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Iterable, List, NamedTuple, Optional, Sequence, Union

from ._fast import FastCurve
from .arith import FieldCtx, Fp2Elem, is_probable_prime
from .curve import Point, WeierstrassCurve
from .families import (
    FamilyCurve,
    InconsistencyError,
    build_family,
    r_from_trace,
)

MAX_EXHAUSTIVE_P = 1 << 7
MAX_CENSUS_P = 1 << 16
SWEEP_PRIMES = (11, 13, 19, 23, 29, 31, 37, 41, 43, 47)


class AmbiguousRecovery(RuntimeError):
    """Several values of r fit the sampled points; retry with other points."""


@dataclass(frozen=True)
class OrderCertificate:
    order: int
    N: int
    cofactor: int
    r: Optional[int]
    t: int
    method: str = "claimed"

    @property
    def n_is_prime(self) -> bool:
        return is_probable_prime(self.N, 64)


def factor_small(n: int) -> List[int]:
    """Prime factors of n with multiplicity, by trial division."""
    out, q = [], 2
    while q * q <= n:
        while n % q == 0:
            out.append(q)
            n //= q
        q += 1 if q == 2 else 2
    if n > 1:
        out.append(n)
    return out


def _curve_of(E) -> WeierstrassCurve:
    return E.curve if isinstance(E, FamilyCurve) else E


def _qr_table(p: int) -> List[bool]:
    sq = [False] * p
    for a in range(1, p):
        sq[a * a % p] = True
    return sq


def _count(curve: WeierstrassCurve) -> int:
    ctx = curve.ctx
    p, D = ctx.p, ctx._d
    A0, A1 = curve.a4.a0, curve.a4.a1
    B0, B1 = curve.a6.a0, curve.a6.a1
    qr = _qr_table(p)
    total = 1
    for x1 in range(p):
        for x0 in range(p):
            s0 = (x0 * x0 + D * x1 * x1 + A0) % p
            s1 = (2 * x0 * x1 + A1) % p
            r0 = (s0 * x0 + D * s1 * x1 + B0) % p
            r1 = (s0 * x1 + s1 * x0 + B1) % p
            if not (r0 or r1):
                total += 1
            elif qr[(r0 * r0 - D * r1 * r1) % p]:
                total += 2
    return total


def _guard(p: int):
    if p > MAX_EXHAUSTIVE_P:
        raise ValueError(f"exhaustive counting is limited to p <= {MAX_EXHAUSTIVE_P}")


def enumerate_points(fc: FastCurve) -> List:
    """All affine points of fc.curve as tuples (INFINITY excluded)."""
    p, D = fc.p, fc.D
    _guard(p)
    curve = fc.curve
    A0, A1 = curve.a4.a0, curve.a4.a1
    B0, B1 = curve.a6.a0, curve.a6.a1
    roots = {}
    for b in range(p):
        for a in range(p):
            key = ((a * a + D * b * b) % p, 2 * a * b % p)
            roots.setdefault(key, []).append((a, b))
    pts = []
    for x1 in range(p):
        for x0 in range(p):
            s0 = (x0 * x0 + D * x1 * x1 + A0) % p
            s1 = (2 * x0 * x1 + A1) % p
            r0 = (s0 * x0 + D * s1 * x1 + B0) % p
            r1 = (s0 * x1 + s1 * x0 + B1) % p
            for y0, y1 in roots.get((r0, r1), ()):
                pts.append((x0, x1, y0, y1))
    return pts


def _largest_simple_prime(order: int):
    fs = factor_small(order)
    simple = [q for q in set(fs) if fs.count(q) == 1]
    N = max(simple) if simple else max(fs)
    return N, order // N


def relation_signs(F: FamilyCurve, r: int, points: Optional[Sequence] = None) -> set:
    """Signs s for which psi^2 - [eps*d*s*r]psi + [dp] kills every given point.

    ``points`` defaults to the full group (tiny p only).
    """
    fc = FastCurve(F.curve, F)
    pts = enumerate_points(fc) if points is None else points
    k = F.eps * F.d * r
    dp = F.d * F.p
    ok = {1, -1}
    for P in pts:
        Q = fc.psi(P)
        A = fc.add(fc.psi(Q), fc.mul(P, dp))
        B = fc.mul(Q, k)
        if A != B:
            ok.discard(1)
        if A != fc.neg(B):
            ok.discard(-1)
        if not ok:
            break
    return ok


def exhaustive_count(E: Union[WeierstrassCurve, FamilyCurve]) -> OrderCertificate:
    """Exact order by running over every abscissa in F_p^2.

    For a family curve the certificate carries r, with its sign fixed by the
    characteristic relation on every rational point; if both signs satisfy
    it the nonnegative one is reported.
    """
    curve = _curve_of(E)
    p = curve.ctx.p
    _guard(p)
    order = _count(curve)
    t = p * p + 1 - order
    N, h = _largest_simple_prime(order)
    r = None
    if isinstance(E, FamilyCurve):
        r0 = r_from_trace(E, t)
        signs = relation_signs(E, r0)
        if not signs:
            raise InconsistencyError("characteristic relation fails for both signs of r")
        r = r0 if 1 in signs else -r0
    return OrderCertificate(order, N, h, r, t, "exhaustive")


def count_by_enumeration(E: WeierstrassCurve) -> int:
    """Slow oracle: test every pair (x, y) in F_p^2 x F_p^2."""
    ctx = E.ctx
    _guard(ctx.p)
    elems = list(ctx.elements())
    return 1 + sum(1 for x in elems for y in elems if y * y == E.rhs(x))


def _r_bound(F: FamilyCurve) -> int:
    # |k| = d|r| <= 2 sqrt(dp)  =>  r^2 <= 4p/d
    return math.isqrt(4 * F.p // F.d) + 1


def _bsgs_candidates(fc: FastCurve, B, T, R: int) -> set:
    """All r in [-R, R] with [r]B == T."""
    if B is None:
        return set(range(-R, R + 1)) if T is None else set()
    p = fc.p
    m = math.isqrt(R) + 1
    table = {}
    J = None
    for j in range(m + 1):
        key = -1 if J is None else J[0] + J[1] * p
        prev = table.get(key)
        if prev is None:
            table[key] = j
        elif isinstance(prev, list):
            prev.append(j)
        else:
            table[key] = [prev, j]
        J = fc.add(J, B)
    step = fc.neg(fc.mul(B, 2 * m + 1))
    c = -R + m
    G = fc.add(T, fc.mul(B, -c))
    out = set()
    while c - m <= R:
        key = -1 if G is None else G[0] + G[1] * p
        hit = table.get(key)
        if hit is not None:
            for j in hit if isinstance(hit, list) else (hit,):
                for r in (c + j, c - j):
                    if -R <= r <= R and fc.mul(B, r) == T:
                        out.add(r)
        G = fc.add(G, step)
        c += 2 * m + 1
    return out


def bsgs_candidates(F: FamilyCurve, P: Point) -> set:
    """Values of r in the Hasse range with psi^2(P) + [dp]P == [eps*d*r] psi(P)."""
    fc = FastCurve(F.curve, F)
    P_ = fc.from_point(P)
    Q = fc.psi(P_)
    T = fc.add(fc.psi(Q), fc.mul(P_, F.d * F.p))
    B = fc.mul(Q, F.eps * F.d)
    return _bsgs_candidates(fc, B, T, _r_bound(F))


def _order_filter(F: FamilyCurve, fc: FastCurve, pts, cands: Iterable[int]) -> set:
    out = set()
    p = F.p
    for r in cands:
        t = F.eps * (F.d * r * r - 2 * p)
        if abs(t) > 2 * p:
            continue
        n = p * p + 1 - t
        if all(fc.mul(P, n) is None for P in pts):
            out.add(r)
    return out


def _span_size(fc: FastCurve, pts, limit: int = 1 << 13) -> Optional[int]:
    """Size of the subgroup generated by pts, or None once it exceeds limit.

    Lagrange then forces the group order to be a multiple of it; this
    separates candidates that [n]P = O alone cannot, e.g. a full torsion
    subgroup Z/m x Z/m.
    """
    H = {None}
    for P in pts:
        if P in H:
            continue
        cyc, Q = [], P
        while Q is not None and Q not in H:
            cyc.append(Q)
            Q = fc.add(Q, P)
            if len(cyc) * len(H) > limit:
                return None
        # <H, P> is the union of H + kP for k below the first multiple in H
        new = set(H)
        for k in cyc:
            new.update(fc.add(h, k) for h in H)
        if len(new) > limit:
            return None
        H = new
    return len(H)


def bsgs_recover_r(
    F: FamilyCurve,
    P: Optional[Point] = None,
    rng: Optional[random.Random] = None,
    confirm: int = 1,
    max_points: int = 16,
) -> int:
    """Recover the signed r of F by baby-step giant-step on multiples of psi(P).

    With an explicit P its candidate set must already be a single value
    (otherwise AmbiguousRecovery asks the caller to retry with another point),
    and ``confirm`` further random points must agree. Without P, candidates
    are intersected over random points until exactly one survives, using at
    least two points.
    """
    fc = FastCurve(F.curve, F)
    rng = rng or random.Random(0)
    if P is not None:
        first = fc.from_point(P)
        cands = _order_filter(F, fc, [first], bsgs_candidates(F, P))
        if not cands:
            raise InconsistencyError("no r in the Hasse range satisfies the characteristic relation")
        if len(cands) > 1:
            raise AmbiguousRecovery(f"{len(cands)} values of r fit this point; retry with another")
        r = next(iter(cands))
        for _ in range(confirm):
            if r not in bsgs_candidates(F, F.random_point(rng)):
                raise InconsistencyError("independent points disagree on r")
        return r
    used, cands = [], None
    while len(used) < max_points:
        Q = F.random_point(rng)
        used.append(fc.from_point(Q))
        c = bsgs_candidates(F, Q)
        cands = c if cands is None else cands & c
        cands = _order_filter(F, fc, used, cands)
        if not cands:
            raise InconsistencyError("no r in the Hasse range satisfies the characteristic relation")
        if len(cands) == 1 and len(used) >= 2:
            return cands.pop()
    span = _span_size(fc, used)
    if span is not None:
        cands = {r for r in cands if certificate_from_r(F, r, N=1).order % span == 0}
        if len(cands) == 1:
            return cands.pop()
    raise AmbiguousRecovery(f"{len(cands)} candidate values of r remain: {sorted(cands)[:8]}")


def certificate_from_r(F: FamilyCurve, r: int, method: str = "bsgs", N: Optional[int] = None) -> OrderCertificate:
    p = F.p
    t = F.eps * (F.d * r * r - 2 * p)
    order = p * p + 1 - t
    if N is None:
        N, h = _largest_simple_prime(order) if order < 1 << 64 else (order, 1)
    else:
        h = order // N
    return OrderCertificate(order, N, h, r, t, method)


def verify_certificate(F: FamilyCurve, cert: OrderCertificate, trials: int = 20, rng: Optional[random.Random] = None) -> bool:
    """Probabilistic check of a claimed order and eigenvalue for F."""
    p = F.p
    if cert.r is None or cert.N <= 1 or cert.order != cert.cofactor * cert.N:
        return False
    if cert.order != p * p + 1 - cert.t:
        return False
    if F.d * cert.r * cert.r != 2 * p + F.eps * cert.t:
        return False
    N = cert.N
    if math.gcd(cert.r, N) != 1:
        return False
    lam = (1 + F.eps * p) * pow(cert.r, -1, N) % N
    if (lam * lam - F.eps * F.d) % N:
        return False
    rng = rng or random.Random(0)
    fc = FastCurve(F.curve, F)
    hit = False
    for _ in range(trials):
        P = fc.from_point(F.random_point(rng))
        if fc.mul(P, cert.order) is not None:
            return False
        Q = fc.mul(P, cert.cofactor)
        if Q is None:
            continue
        hit = True
        if fc.psi(Q) != fc.mul(Q, lam):
            return False
    return hit


class Census(NamedTuple):
    distinct: int
    curves: int
    closed_form_ok: bool


def closed_form_j(F: FamilyCurve) -> Fp2Elem:
    ctx = F.ctx
    if F.d == 2:
        su = ctx(0, F.s)
        return 64 * (5 - 3 * su) ** 3 / ((1 - su * su) * (1 + su))
    if F.d == 3:
        C = F.C
        return -6912 * (2 * C + 1) ** 3 / (C * (C - 4) ** 3)
    raise ValueError("closed form only for degrees 2 and 3")


def j_census(ctx: FieldCtx, d: int) -> Census:
    """Distinct j-invariants of the degree-d family as s runs over F_p."""
    if ctx.p > MAX_CENSUS_P:
        raise ValueError(f"census limited to p <= {MAX_CENSUS_P}")
    seen = set()
    ok = True
    for s in range(ctx.p):
        F = build_family(ctx, d, s)
        j = F.curve.j_invariant()
        ok = ok and j == closed_form_j(F)
        seen.add(j)
    return Census(len(seen), ctx.p, ok)
