"""Curve families over F_p^2 carrying an efficient endomorphism psi.

Degree 2: y^2 = x^3 + 2(C - 24)x - 8(C - 16),  C = 9(1 + s*u)
Degree 3: y^2 = x^3 - 3(2C + 1)x + (C^2 + 10C - 2),  C = 2(1 + s*u)
Degree 1: a curve defined over F_p viewed over F_p^2 (the GLS setting).

Here u = sqrt(delta). psi is the p-power sub-Frobenius composed with the
d-isogeny to the conjugate curve; on a quadratic twist by mu it is conjugated
through the twisting isomorphism, which only needs even powers of sqrt(mu).

Each family curve has an effective sign ``eps`` (eps_p, negated on the
twist) such that psi^2 = [eps*d] on rational points, d*r^2 = 2p + eps*t and
psi = (pi + eps*p)/r.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Optional

from .arith import FieldCtx, Fp2Elem, find_nonsquare, fp2_sqrt
from .curve import CurveMismatchError, OpCounter, Point, WeierstrassCurve, quadratic_twist, scalar_mul


class InvalidOrderError(ValueError):
    """A claimed group order is incompatible with the family."""


class InconsistencyError(ValueError):
    """Computed quantities contradict each other."""


def eps2(p: int) -> int:
    return 1 if p % 8 in (5, 7) else -1


def eps3(p: int) -> int:
    return 1 if p % 3 == 2 else -1


@dataclass(frozen=True)
class EndoParams:
    r: int
    trace: int
    order: int
    lam: int
    N: int
    cofactor: int
    t0: Optional[int] = None  # degree 1 only: r = +-t0, t0^2 - 2p = trace of the untwisted curve


@dataclass(frozen=True)
class FamilyCurve:
    d: int
    s: int
    curve: WeierstrassCurve
    eps_p: int
    sqrt_md: Optional[Fp2Elem]
    twisted: bool = False
    mu: Optional[Fp2Elem] = None
    C: Optional[Fp2Elem] = None
    params: Optional[EndoParams] = field(default=None, compare=False)

    @property
    def ctx(self) -> FieldCtx:
        return self.curve.ctx

    @property
    def p(self) -> int:
        return self.curve.ctx.p

    @property
    def eps(self) -> int:
        """Sign with psi^2 = [eps*d]: eps_p, or -eps_p on the twist."""
        return -self.eps_p if self.twisted else self.eps_p

    @property
    def kernel_x(self) -> Optional[Fp2Elem]:
        """Abscissa (before untwisting) of the rational pole of psi."""
        return {1: None, 2: self.ctx(4), 3: self.ctx(3)}[self.d]

    def with_params(self, params: EndoParams) -> "FamilyCurve":
        return replace(self, params=params)

    def twist(self) -> "FamilyCurve":
        """The family curve on the other side of the quadratic twist."""
        if self.d == 1:
            base = self.curve if not self.twisted else quadratic_twist(self.curve, self.mu.inverse())
            return build_gls(self.ctx, base.a4, base.a6, twisted=not self.twisted)
        builder = build_e2 if self.d == 2 else build_e3
        return builder(self.ctx, self.s, twisted=not self.twisted)

    @cached_property
    def _psi_consts(self):
        ctx = self.ctx
        p = ctx.p
        if self.twisted:
            mu = self.mu
            xin = mu.conj().inverse()  # mu^-p
            xout = mu
            yscale = (mu ** ((p - 1) // 2)).inverse() ** 3  # sqrt(mu)^(3(1-p))
        else:
            xin = xout = yscale = ctx.one
        if self.d == 1:
            return xin, xout, yscale, ()
        md_inv = self.sqrt_md.inverse()
        if self.d == 2:
            inv2 = ctx(2).inverse()
            return xin, xout, yscale, (-inv2, self.C.conj(), md_inv)
        # The 3-isogeny E_C -> E_conj(C) is written in terms of conj(C) = 4 - C,
        # so after the p-power its coefficients involve C itself.
        inv3 = ctx(3).inverse()
        Cp = self.C
        Cp2 = Cp * Cp
        return xin, xout, yscale, (-inv3, 4 * Cp, 4 * Cp2 * inv3, 8 * Cp2 * inv3, md_inv)

    def random_point(self, rng: random.Random) -> Point:
        return self.curve.random_point(rng)


def _psi_d1_check(a4: Fp2Elem, a6: Fp2Elem):
    if a4.a1 or a6.a1:
        raise ValueError("subfield curve coefficients must lie in F_p")


def build_e2(ctx: FieldCtx, s: int, twisted: bool = False) -> FamilyCurve:
    s %= ctx.p
    C = 9 * (1 + ctx(0, s))
    a4 = 2 * (C - 24)
    a6 = -8 * (C - 16)
    return _finish(ctx, 2, s, C, a4, a6, eps2(ctx.p), twisted)


def build_e3(ctx: FieldCtx, s: int, twisted: bool = False) -> FamilyCurve:
    s %= ctx.p
    C = 2 * (1 + ctx(0, s))
    a4 = -3 * (2 * C + 1)
    a6 = C * C + 10 * C - 2
    return _finish(ctx, 3, s, C, a4, a6, eps3(ctx.p), twisted)


def build_family(ctx: FieldCtx, d: int, s: int = 0, twisted: bool = False) -> FamilyCurve:
    if d == 2:
        return build_e2(ctx, s, twisted)
    if d == 3:
        return build_e3(ctx, s, twisted)
    raise ValueError(f"unsupported family degree {d}; use build_gls for degree 1")


def _finish(ctx, d, s, C, a4, a6, eps_p, twisted) -> FamilyCurve:
    base = WeierstrassCurve(a4, a6)
    sqrt_md = fp2_sqrt(ctx(-d))
    assert sqrt_md is not None  # every element of F_p is a square in F_p^2
    mu = None
    curve = base
    if twisted:
        mu = find_nonsquare(ctx)
        curve = quadratic_twist(base, mu)
    return FamilyCurve(d, s, curve, eps_p, sqrt_md, twisted, mu, C)


def build_gls(ctx: FieldCtx, a4, a6, twisted: bool = True) -> FamilyCurve:
    """Degree-1 family: subfield curve y^2 = x^3 + a4 x + a6 over F_p, base-extended.

    With ``twisted`` (the default) the result is the quadratic twist, where psi
    squares to -1 on rational points.
    """
    a4 = a4 if isinstance(a4, Fp2Elem) else ctx(a4)
    a6 = a6 if isinstance(a6, Fp2Elem) else ctx(a6)
    _psi_d1_check(a4, a6)
    base = WeierstrassCurve(a4, a6)
    mu = None
    curve = base
    if twisted:
        mu = find_nonsquare(ctx)
        curve = quadratic_twist(base, mu)
    return FamilyCurve(1, 0, curve, 1, None, twisted, mu, None)


def psi(F: FamilyCurve, P: Point, counter: Optional[OpCounter] = None) -> Point:
    """Evaluate the family endomorphism on a rational point of F.curve."""
    if P.curve is not F.curve and P.curve != F.curve:
        raise CurveMismatchError("point is not on the family curve")
    if counter is not None:
        counter.psi_evals += 1
    if P.x is None:
        return P
    xin, xout, yscale, k = F._psi_consts
    X = P.x.conj() * xin
    Y = P.y.conj() * yscale
    if F.d == 1:
        return Point(F.curve, X * xout, Y, check=False)
    if F.d == 2:
        neg_half, Cp, md_inv = k
        w = X - 4
        if not w:
            return F.curve.infinity
        q = Cp / w
        fx = neg_half * X - q
        gy = (neg_half + q / w) * md_inv
    else:
        neg_third, c1, c2, c3, md_inv = k
        w = X - 3
        if not w:
            return F.curve.infinity
        wi = w.inverse()
        wi2 = wi * wi
        fx = neg_third * X - c1 * wi - c2 * wi2
        gy = (neg_third + c1 * wi2 + c3 * wi2 * wi) * md_inv
    return Point(F.curve, fx * xout, Y * gy, check=False)


def verify_psi_square(F: FamilyCurve, P: Point) -> bool:
    """psi(psi(P)) == [eps*d]P (the p^2-Frobenius fixes rational points)."""
    return psi(F, psi(F, P)) == scalar_mul(P, F.eps * F.d)


def char_poly_residual(F: FamilyCurve, P: Point, r: int) -> Point:
    """psi^2(P) - [eps*d*r] psi(P) + [d*p] P; INFINITY when the relation holds."""
    Q = psi(F, P)
    return psi(F, Q) - scalar_mul(Q, F.eps * F.d * r) + scalar_mul(P, F.d * F.p)


def r_from_trace(F: FamilyCurve, t: int) -> int:
    """Nonnegative r with d*r^2 = 2p + eps*t; InvalidOrderError if none exists."""
    val = 2 * F.p + F.eps * t
    if val < 0 or val % F.d:
        raise InvalidOrderError(f"2p + eps*t = {val} is not d times a square")
    r = math.isqrt(val // F.d)
    if r * r * F.d != val:
        raise InvalidOrderError(f"(2p + eps*t)/d = {val // F.d} is not a perfect square")
    return r


def eigenvalue(F: FamilyCurve, r: int, N: int) -> int:
    return (1 + F.eps * F.p) * pow(r, -1, N) % N


def endo_params(F: FamilyCurve, order: int, N: int, rng: Optional[random.Random] = None, tries: int = 32) -> EndoParams:
    """Derive r, trace and the eigenvalue of psi on the order-N subgroup.

    The sign of r is fixed by checking psi(Q) == [lambda]Q on a point Q of
    order N.
    """
    p = F.p
    if order <= 0 or N <= 1 or order % N:
        raise InvalidOrderError("N must be a proper divisor of the order")
    t = p * p + 1 - order
    if abs(t) > 2 * p:
        raise InvalidOrderError(f"order {order} violates the Hasse bound")
    r0 = r_from_trace(F, t)
    if r0 == 0 or math.gcd(r0, N) != 1:
        raise InvalidOrderError("r is not invertible modulo N; no eigenvalue")
    h = order // N
    rng = rng or random.Random(0)
    Q = None
    for _ in range(tries):
        Q = scalar_mul(F.random_point(rng), h)
        if Q.x is not None:
            break
    else:
        raise InvalidOrderError("could not find a point in the order-N subgroup")
    if scalar_mul(Q, N).x is not None:
        raise InvalidOrderError("[N] does not kill the cofactor-cleared point; wrong order")
    image = psi(F, Q)
    for r in (r0, -r0):
        lam = eigenvalue(F, r, N)
        if image == scalar_mul(Q, lam):
            t0 = r if F.d == 1 else None
            return EndoParams(r, t, order, lam, N, h, t0)
    raise InconsistencyError("neither sign of r gives the eigenvalue of psi")


def kernel_points(F: FamilyCurve) -> list:
    """Rational points other than INFINITY that psi sends to INFINITY."""
    out = []
    kx = F.kernel_x
    if kx is None:
        return out
    x = kx * F.mu if F.twisted else kx
    P = F.curve.lift_x(x)
    if P is not None:
        out.append(P)
        if P.y:
            out.append(-P)
    return out


def order3_point(F: FamilyCurve) -> Point:
    """The rational kernel point (3, 2(1 - s*u)) = (3, 4 - C) of an untwisted degree-3 curve."""
    if F.d != 3 or F.twisted:
        raise ValueError("only untwisted degree-3 curves carry a rational 3-torsion kernel point")
    return F.curve.point(3, 4 - F.C)

