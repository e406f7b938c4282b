"""Short Weierstrass curves y^2 = x^3 + a4*x + a6 over F_p^2."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterator, Optional

from .arith import FieldCtx, Fp2Elem, decode_fp2, encode_fp2, fp2_sqrt


class CurveMismatchError(ValueError):
    """Points on different curves were combined."""


class NotOnCurveError(ValueError):
    pass


@dataclass
class OpCounter:
    """Group-operation tally filled in by the scalar multiplication routines."""

    doublings: int = 0
    additions: int = 0
    psi_evals: int = 0

    def reset(self):
        self.doublings = self.additions = self.psi_evals = 0


@dataclass(frozen=True)
class WeierstrassCurve:
    a4: Fp2Elem
    a6: Fp2Elem

    def __post_init__(self):
        if self.a4.ctx != self.a6.ctx:
            raise ValueError("coefficients from different fields")
        if not self.discriminant():
            raise ValueError("singular curve: 4*a4^3 + 27*a6^2 = 0")

    @property
    def ctx(self) -> FieldCtx:
        return self.a4.ctx

    def discriminant(self) -> Fp2Elem:
        return -16 * (4 * self.a4 ** 3 + 27 * self.a6 * self.a6)

    def j_invariant(self) -> Fp2Elem:
        c = 4 * self.a4 ** 3
        return 1728 * c / (c + 27 * self.a6 * self.a6)

    def rhs(self, x: Fp2Elem) -> Fp2Elem:
        return (x * x + self.a4) * x + self.a6

    def contains(self, x: Fp2Elem, y: Fp2Elem) -> bool:
        return y * y == self.rhs(x)

    @property
    def infinity(self) -> "Point":
        return Point(self, None, None)

    def point(self, x, y) -> "Point":
        ctx = self.ctx
        if isinstance(x, int):
            x = ctx(x)
        if isinstance(y, int):
            y = ctx(y)
        return Point(self, x, y)

    def lift_x(self, x: Fp2Elem) -> Optional["Point"]:
        """Point with abscissa x and the canonical ordinate, if one exists."""
        y = fp2_sqrt(self.rhs(x))
        if y is None:
            return None
        return Point(self, x, y, check=False)

    def random_point(self, rng: random.Random) -> "Point":
        while True:
            P = self.lift_x(self.ctx.random(rng))
            if P is not None:
                return -P if rng.getrandbits(1) else P

    def points(self) -> Iterator["Point"]:
        """Every rational point, INFINITY first. Only sensible for tiny p."""
        yield self.infinity
        for x in self.ctx.elements():
            P = self.lift_x(x)
            if P is None:
                continue
            yield P
            if P.y:
                yield -P

    def conjugate(self) -> "WeierstrassCurve":
        return WeierstrassCurve(self.a4.conj(), self.a6.conj())

    def twist(self, mu: Fp2Elem) -> "WeierstrassCurve":
        return quadratic_twist(self, mu)


class Point:
    """Affine point on a WeierstrassCurve; ``x is None`` encodes INFINITY."""

    __slots__ = ("curve", "x", "y")

    def __init__(self, curve: WeierstrassCurve, x: Optional[Fp2Elem], y: Optional[Fp2Elem], check: bool = True):
        if check and x is not None and not curve.contains(x, y):
            raise NotOnCurveError(f"({x}, {y}) is not on the curve")
        self.curve = curve
        self.x = x
        self.y = y

    @property
    def is_infinity(self) -> bool:
        return self.x is None

    def __neg__(self):
        if self.x is None:
            return self
        return Point(self.curve, self.x, -self.y, check=False)

    def __add__(self, other):
        return add(self, other)

    def __sub__(self, other):
        return add(self, -other)

    def __mul__(self, m: int):
        return scalar_mul(self, m)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, Point):
            return NotImplemented
        return self.curve == other.curve and self.x == other.x and self.y == other.y

    def __hash__(self):
        return hash((self.x, self.y))

    def __repr__(self):
        if self.x is None:
            return "Point(INFINITY)"
        return f"Point({self.x}, {self.y})"


def _same_curve(P: Point, Q: Point):
    if P.curve is not Q.curve and P.curve != Q.curve:
        raise CurveMismatchError("points lie on different curves")


def double(P: Point, counter: Optional[OpCounter] = None) -> Point:
    if counter is not None:
        counter.doublings += 1
    if P.x is None or not P.y:
        return P.curve.infinity
    x, y = P.x, P.y
    lam = (3 * x * x + P.curve.a4) / (2 * y)
    x3 = lam * lam - 2 * x
    return Point(P.curve, x3, lam * (x - x3) - y, check=False)


def add(P: Point, Q: Point, counter: Optional[OpCounter] = None) -> Point:
    """Chord-and-tangent addition."""
    _same_curve(P, Q)
    if P.x is None:
        return Q
    if Q.x is None:
        return P
    if P.x == Q.x:
        if P.y == Q.y:
            return double(P, counter)
        if counter is not None:
            counter.additions += 1
        return P.curve.infinity
    if counter is not None:
        counter.additions += 1
    lam = (Q.y - P.y) / (Q.x - P.x)
    x3 = lam * lam - P.x - Q.x
    return Point(P.curve, x3, lam * (P.x - x3) - P.y, check=False)


def scalar_mul(P: Point, m: int, counter: Optional[OpCounter] = None) -> Point:
    """Left-to-right double-and-add; one doubling per bit of |m|."""
    if m < 0:
        P, m = -P, -m
    R = P.curve.infinity
    for bit in bin(m)[2:] if m else ():
        R = double(R, counter)
        if bit == "1":
            R = add(R, P, counter)
    return R


def quadratic_twist(E: WeierstrassCurve, mu: Fp2Elem) -> WeierstrassCurve:
    """Curve with coefficients (mu^2*a4, mu^3*a6)."""
    if not mu:
        raise ValueError("twisting parameter must be nonzero")
    mu2 = mu * mu
    return WeierstrassCurve(mu2 * E.a4, mu2 * mu * E.a6)


def twist_isomorphism(P: Point, lambda_sq: Fp2Elem) -> Point:
    """(x, y) -> (lambda^2 x, lambda^3 y) onto ``quadratic_twist(E, lambda_sq)``.

    Only the F_p^2-rational case is supported, i.e. lambda_sq must be a square.
    """
    lam = fp2_sqrt(lambda_sq) if lambda_sq else None
    if lam is None:
        raise ValueError("twisting parameter is not a nonzero square; the map is not F_p^2-rational")
    target = quadratic_twist(P.curve, lambda_sq)
    if P.x is None:
        return target.infinity
    return Point(target, lambda_sq * P.x, lambda_sq * lam * P.y, check=False)


def sub_frobenius(P: Point) -> Point:
    """(x, y) -> (x^p, y^p), landing on the conjugate curve."""
    target = P.curve.conjugate()
    if P.x is None:
        return target.infinity
    return Point(target, P.x.conj(), P.y.conj(), check=False)


def frobenius_endo(P: Point) -> Point:
    """The p^2-power Frobenius of P.curve, as the square of ``sub_frobenius``."""
    Q = sub_frobenius(sub_frobenius(P))
    return Point(P.curve, Q.x, Q.y, check=False) if Q.x is not None else P.curve.infinity


def encode_point(P: Point) -> str:
    if P.x is None:
        return "inf"
    return f"{encode_fp2(P.x)},{encode_fp2(P.y)}"


def decode_point(text: str, E: WeierstrassCurve) -> Point:
    """Parse ``encode_point`` output; off-curve input is rejected."""
    text = text.strip()
    if text == "inf":
        return E.infinity
    xs, ys = text.split(",")
    return Point(E, decode_fp2(xs, E.ctx), decode_fp2(ys, E.ctx))
