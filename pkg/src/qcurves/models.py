"""Alternative models of the degree-2 and degree-3 family curves.

Montgomery, twisted Edwards and the doubling/tripling-oriented
Doche-Icart-Kohel (DIK) shapes, with the point maps from the short
Weierstrass family curve and an x-only Montgomery version of psi.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

from .arith import FieldCtx, Fp2Elem, fp2_is_square, fp2_sqrt
from .curve import CurveMismatchError, NotOnCurveError, OpCounter, Point, WeierstrassCurve
from .families import FamilyCurve


class ExceptionalPointError(ValueError):
    """A birational map is undefined at this point."""


class ModelPoint:
    """Affine point on one of the models here; ``x is None`` is the neutral element."""

    __slots__ = ("curve", "x", "y")

    def __init__(self, curve, x, y, check=True):
        if check and x is not None and not curve.contains(x, y):
            raise NotOnCurveError(f"({x}, {y}) is not on {curve!r}")
        self.curve = curve
        self.x = x
        self.y = y

    @property
    def is_infinity(self) -> bool:
        return self.x is None

    def __add__(self, other):
        return self.curve.add(self, other)

    def __neg__(self):
        return self.curve.neg(self)

    def __eq__(self, other):
        if not isinstance(other, ModelPoint):
            return NotImplemented
        return self.curve == other.curve and self.x == other.x and self.y == other.y

    def __hash__(self):
        return hash((self.x, self.y))

    def __repr__(self):
        return "ModelPoint(neutral)" if self.x is None else f"ModelPoint({self.x}, {self.y})"


class _LongWeierstrass:
    """Chord-and-tangent law on c*y^2 = x^3 + a2*x^2 + a4*x + a6."""

    def _coeffs(self):
        raise NotImplementedError

    def contains(self, x, y) -> bool:
        c, a2, a4, a6 = self._coeffs()
        return c * y * y == ((x + a2) * x + a4) * x + a6

    @property
    def infinity(self) -> ModelPoint:
        return ModelPoint(self, None, None)

    def point(self, x, y) -> ModelPoint:
        return ModelPoint(self, x, y)

    def neg(self, P: ModelPoint) -> ModelPoint:
        return P if P.x is None else ModelPoint(self, P.x, -P.y, check=False)

    def add(self, P: ModelPoint, Q: ModelPoint) -> ModelPoint:
        if P.curve != self or Q.curve != self:
            raise CurveMismatchError("points lie on different models")
        if P.x is None:
            return Q
        if Q.x is None:
            return P
        c, a2, a4, _ = self._coeffs()
        if P.x == Q.x:
            if P.y != Q.y or not P.y:
                return self.infinity
            lam = ((3 * P.x + 2 * a2) * P.x + a4) / (2 * c * P.y)
        else:
            lam = (Q.y - P.y) / (Q.x - P.x)
        x3 = c * lam * lam - a2 - P.x - Q.x
        return ModelPoint(self, x3, lam * (P.x - x3) - P.y, check=False)


@dataclass(frozen=True, eq=False)
class MontgomeryCurve(_LongWeierstrass):
    """B*v^2 = u^3 + A*u^2 + u."""

    A: Fp2Elem
    B: Fp2Elem
    family: Optional[FamilyCurve] = field(default=None, repr=False)

    def __post_init__(self):
        if not (self.B * (self.A * self.A - 4)):
            raise ValueError("B(A^2 - 4) must be nonzero")
        # constant of the x-only psi, B^(1-p) = B * conj(B)^-1
        object.__setattr__(self, "_b1p", self.B / self.B.conj())

    def __eq__(self, other):
        return isinstance(other, MontgomeryCurve) and self.A == other.A and self.B == other.B

    def __hash__(self):
        return hash((self.A, self.B))

    @property
    def ctx(self) -> FieldCtx:
        return self.A.ctx

    def _coeffs(self):
        z = self.ctx.zero
        return self.B, self.A, self.ctx.one, z


@dataclass(frozen=True)
class TwistedEdwardsCurve:
    """a*x^2 + y^2 = 1 + d*x^2*y^2 with neutral element (0, 1)."""

    a: Fp2Elem
    d_coeff: Fp2Elem

    def __post_init__(self):
        if not self.a or not self.d_coeff or self.a == self.d_coeff:
            raise ValueError("need a, d nonzero and distinct")

    @property
    def ctx(self) -> FieldCtx:
        return self.a.ctx

    def contains(self, x, y) -> bool:
        x2, y2 = x * x, y * y
        return self.a * x2 + y2 == 1 + self.d_coeff * x2 * y2

    @property
    def neutral(self) -> ModelPoint:
        ctx = self.ctx
        return ModelPoint(self, ctx.zero, ctx.one, check=False)

    def point(self, x, y) -> ModelPoint:
        return ModelPoint(self, x, y)

    def neg(self, P: ModelPoint) -> ModelPoint:
        return ModelPoint(self, -P.x, P.y, check=False)

    def add(self, P: ModelPoint, Q: ModelPoint) -> ModelPoint:
        if P.curve != self or Q.curve != self:
            raise CurveMismatchError("points lie on different models")
        t = self.d_coeff * P.x * Q.x * P.y * Q.y
        if t == 1 or t == -1:
            raise ExceptionalPointError("Edwards addition denominator vanishes")
        x3 = (P.x * Q.y + P.y * Q.x) / (1 + t)
        y3 = (P.y * Q.y - self.a * P.x * Q.x) / (1 - t)
        return ModelPoint(self, x3, y3, check=False)


@dataclass(frozen=True)
class DikCurve(_LongWeierstrass):
    """doubling: v^2 = u(u^2 + D*u + 16D);  tripling: v^2 = u^3 + 3a(u + 1)^2."""

    variant: str
    coeff: Fp2Elem

    def __post_init__(self):
        if self.variant not in ("doubling", "tripling"):
            raise ValueError("variant must be 'doubling' or 'tripling'")

    @property
    def ctx(self) -> FieldCtx:
        return self.coeff.ctx

    def _coeffs(self):
        k, one = self.coeff, self.ctx.one
        if self.variant == "doubling":
            return one, k, 16 * k, self.ctx.zero
        return one, 3 * k, 6 * k, 3 * k


@dataclass(frozen=True)
class Conversion:
    """A model together with the point maps to and from the source curve."""

    target: object
    forward: Callable
    backward: Callable


def _require(F: FamilyCurve, d: int):
    if F.d != d:
        raise ValueError(f"expected a degree-{d} family curve, got degree {F.d}")
    if F.twisted:
        raise ValueError("models are defined for the untwisted family curve")


def admits_montgomery(E: WeierstrassCurve) -> bool:
    """True iff E has a point (alpha, 0) with 3*alpha^2 + a4 a square in F_p^2."""
    return any(fp2_is_square(3 * a * a + E.a4) for a in _cubic_roots(E))


def _pmod(a, f):
    """a mod f for coefficient lists (lowest degree first), f monic."""
    a = list(a)
    n = len(f) - 1
    for i in range(len(a) - 1, n - 1, -1):
        c = a[i]
        if c:
            for j in range(n + 1):
                a[i - n + j] = a[i - n + j] - c * f[j]
    a = a[:n] or [f[0].ctx.zero]
    while len(a) > 1 and not a[-1]:
        a.pop()
    return a


def _pmulmod(a, b, f):
    zero = f[0].ctx.zero
    out = [zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return _pmod(out, f)


def _ppowmod(a, e, f):
    r, b = [f[0].ctx.one], _pmod(a, f)
    while e:
        if e & 1:
            r = _pmulmod(r, b, f)
        b = _pmulmod(b, b, f)
        e >>= 1
    return r


def _pgcd(a, b):
    """Monic gcd; inputs are coefficient lists."""
    def norm(v):
        v = list(v)
        while len(v) > 1 and not v[-1]:
            v.pop()
        return v

    a, b = norm(a), norm(b)
    while any(b):
        inv = b[-1].inverse()
        a, b = b, _pmod(a, [c * inv for c in b])
    inv = a[-1].inverse()
    return [c * inv for c in a]


def _cubic_roots(E: WeierstrassCurve) -> list:
    """Roots of x^3 + a4*x + a6 in F_p^2."""
    ctx = E.ctx
    q = ctx.p ** 2
    f = [E.a6, E.a4, ctx.zero, ctx.one]
    X = [ctx.zero, ctx.one]
    xq = _ppowmod(X, q, f) + [ctx.zero] * 2
    g = _pgcd(f, [xq[0], xq[1] - 1, xq[2]])
    if len(g) == 1:
        return []
    if len(g) == 2:
        return [-g[0]]
    # three rational roots: split off one, then solve the quadratic
    import random as _random

    rng = _random.Random(0)
    while True:
        w = _ppowmod([ctx.random(rng), ctx.one], (q - 1) // 2, f) + [ctx.zero] * 2
        h = _pgcd(f, [w[0] - 1, w[1], w[2]])
        if len(h) == 2:
            root = -h[0]
            break
        if len(h) == 3:
            # f = h * (x - root)
            root = -(f[2] - h[1])
            break
    disc = root * root * -3 - 4 * E.a4
    sq = fp2_sqrt(disc)
    half = ctx(2).inverse()
    return [root, (-root + sq) * half, (-root - sq) * half]


def to_montgomery(F: FamilyCurve) -> Optional[Conversion]:
    """Montgomery model of an untwisted degree-2 curve, or None if 2C is not a square.

    B = sqrt(2C), A = 12/B and (x, y) -> ((x - 4)/B, y/B^2).
    """
    _require(F, 2)
    B = fp2_sqrt(2 * F.C)
    if B is None:
        return None
    M = MontgomeryCurve(12 / B, B, F)
    Binv = B.inverse()
    Binv2 = Binv * Binv
    E = F.curve

    def forward(P: Point) -> ModelPoint:
        if P.curve != E:
            raise CurveMismatchError("point is not on the family curve")
        if P.x is None:
            return M.infinity
        return ModelPoint(M, (P.x - 4) * Binv, P.y * Binv2, check=False)

    def backward(Q: ModelPoint) -> Point:
        if Q.x is None:
            return E.infinity
        return Point(E, B * Q.x + 4, B * B * Q.y, check=False)

    return Conversion(M, forward, backward)


def to_twisted_edwards(M: MontgomeryCurve) -> Conversion:
    """Twisted Edwards model with a = (A+2)/B, d = (A-2)/B.

    (u, v) -> (u/v, (u-1)/(u+1)) and back; the neutral elements correspond,
    other points where a denominator vanishes raise ExceptionalPointError.
    """
    T = TwistedEdwardsCurve((M.A + 2) / M.B, (M.A - 2) / M.B)

    def forward(P: ModelPoint) -> ModelPoint:
        if P.x is None:
            return T.neutral
        if not P.y or P.x == -1:
            raise ExceptionalPointError(f"{P} has no Edwards image under the birational map")
        return ModelPoint(T, P.x / P.y, (P.x - 1) / (P.x + 1), check=False)

    def backward(Q: ModelPoint) -> ModelPoint:
        if Q == T.neutral:
            return M.infinity
        if not Q.x or Q.y == 1:
            raise ExceptionalPointError(f"{Q} has no Montgomery image under the birational map")
        u = (1 + Q.y) / (1 - Q.y)
        return ModelPoint(M, u, u / Q.x, check=False)

    return Conversion(T, forward, backward)


def to_dik(F: FamilyCurve) -> Optional[Conversion]:
    """DIK model: doubling-oriented for degree 2, tripling-oriented for degree 3.

    Degree 2: mu^2 = 96/C, (x, y) -> (mu^2 (x - 4), mu^3 y), D = 128/(1 + s*u).
    Degree 3: a = 9/(4 - C), b^2 = a/3, (x, y) -> (a(x/3 - 1), b^3 y).
    None when the scaling square root is missing from F_p^2.
    """
    if F.twisted or F.d not in (2, 3):
        raise ValueError("DIK models need an untwisted degree-2 or degree-3 family curve")
    ctx = F.ctx
    if F.d == 2:
        m = fp2_sqrt(6 / F.C)
        if m is None:
            return None
        mu = 4 * m
        target = DikCurve("doubling", 128 / (1 + ctx(0, F.s)))
        shift = ctx(4)
    else:
        a = 9 / (4 - F.C)
        mu = fp2_sqrt(a / 3)
        if mu is None:
            return None
        target = DikCurve("tripling", a)
        shift = ctx(3)
    mu2 = mu * mu
    mu3 = mu2 * mu
    E = F.curve

    def forward(P: Point) -> ModelPoint:
        if P.x is None:
            return target.infinity
        return ModelPoint(target, mu2 * (P.x - shift), mu3 * P.y, check=False)

    def backward(Q: ModelPoint) -> Point:
        if Q.x is None:
            return E.infinity
        return Point(E, Q.x / mu2 + shift, Q.y / mu3, check=False)

    return Conversion(target, forward, backward)


class XZPoint:
    """Projective x-line class (X : Z) on a Montgomery curve."""

    __slots__ = ("X", "Z")

    def __init__(self, X: Fp2Elem, Z: Fp2Elem):
        if not X and not Z:
            raise ValueError("(0 : 0) is not a projective point")
        self.X = X
        self.Z = Z

    @classmethod
    def from_point(cls, P: ModelPoint) -> "XZPoint":
        ctx = P.curve.ctx
        if P.x is None:
            return cls(ctx.one, ctx.zero)
        return cls(P.x, ctx.one)

    @property
    def is_infinity(self) -> bool:
        return not self.Z

    def affine(self) -> Optional[Fp2Elem]:
        return None if not self.Z else self.X / self.Z

    def __eq__(self, other):
        if not isinstance(other, XZPoint):
            return NotImplemented
        return self.X * other.Z == other.X * self.Z

    def __hash__(self):
        return hash(self.affine())

    def __repr__(self):
        return f"XZPoint({self.X} : {self.Z})"


def _xdbl(P: XZPoint, a24: Fp2Elem) -> XZPoint:
    s, d = P.X + P.Z, P.X - P.Z
    s2, d2 = s * s, d * d
    e = s2 - d2  # 4XZ
    return XZPoint(s2 * d2, e * (d2 + a24 * e))


def _xadd(P: XZPoint, Q: XZPoint, diff: XZPoint) -> XZPoint:
    u = (P.X - P.Z) * (Q.X + Q.Z)
    v = (P.X + P.Z) * (Q.X - Q.Z)
    return XZPoint(diff.Z * (u + v) ** 2, diff.X * (u - v) ** 2)


def xz_ladder(M: MontgomeryCurve, x: XZPoint, m: int, counter: Optional[OpCounter] = None) -> XZPoint:
    """x([m]P) from x(P) by the Montgomery ladder."""
    ctx = M.ctx
    inf = XZPoint(ctx.one, ctx.zero)
    m = abs(m)
    if m == 0 or x.is_infinity:
        return inf
    if not x.X:
        # (0, 0) has order 2; the differential formulas degenerate on it
        return x if m & 1 else inf
    a24 = (M.A + 2) / 4
    R0, R1 = inf, x
    for bit in bin(m)[2:]:
        if counter is not None:
            counter.doublings += 1
            counter.additions += 1
        if bit == "1":
            R0, R1 = _xadd(R0, R1, x), _xdbl(R1, a24)
        else:
            R0, R1 = _xdbl(R0, a24), _xadd(R0, R1, x)
    return R0


def xz_psi(M: MontgomeryCurve, x: XZPoint) -> XZPoint:
    """psi on the x-line: (X^2p + A^p X^p Z^p + Z^2p : -2 B^(1-p) X^p Z^p)."""
    if M.family is None:
        raise ValueError("xz_psi needs a Montgomery curve built by to_montgomery")
    Xp, Zp = x.X.conj(), x.Z.conj()
    XZ = Xp * Zp
    return XZPoint(Xp * Xp + M.A.conj() * XZ + Zp * Zp, -2 * M._b1p * XZ)
