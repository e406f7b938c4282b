"""Tuple-based point arithmetic for the enumeration and BSGS loops.

Points are ``(x0, x1, y0, y1)`` integer tuples or ``None`` for INFINITY. The
results agree with the object layer in ``curve``/``families``; only the
per-operation overhead differs.
"""

from __future__ import annotations

from typing import Optional, Tuple

from .curve import Point

FPoint = Optional[Tuple[int, int, int, int]]


def _t(e):
    return (e.a0, e.a1)


class FastCurve:
    def __init__(self, curve, family=None):
        ctx = curve.ctx
        self.curve = curve
        self.family = family
        self.p = ctx.p
        self.D = ctx._d
        self.A = _t(curve.a4)
        if family is not None:
            xin, xout, yscale, k = family._psi_consts
            self._xin, self._xout, self._ys = _t(xin), _t(xout), _t(yscale)
            self._k = tuple(_t(c) for c in k)
            self._d = family.d

    def from_point(self, P: Point) -> FPoint:
        if P.x is None:
            return None
        return (P.x.a0, P.x.a1, P.y.a0, P.y.a1)

    def to_point(self, T: FPoint) -> Point:
        if T is None:
            return self.curve.infinity
        ctx = self.curve.ctx
        return Point(self.curve, ctx(T[0], T[1]), ctx(T[2], T[3]), check=False)

    def neg(self, P: FPoint) -> FPoint:
        if P is None:
            return None
        p = self.p
        return (P[0], P[1], -P[2] % p, -P[3] % p)

    def dbl(self, P: FPoint) -> FPoint:
        if P is None:
            return None
        p, D = self.p, self.D
        x0, x1, y0, y1 = P
        if not (y0 or y1):
            return None
        # lam = (3x^2 + a4) / (2y)
        n0 = (3 * (x0 * x0 + D * x1 * x1) + self.A[0]) % p
        n1 = (6 * x0 * x1 + self.A[1]) % p
        e0, e1 = 2 * y0, 2 * y1
        inv = pow((e0 * e0 - D * e1 * e1) % p, -1, p)
        i0, i1 = e0 * inv, -e1 * inv
        l0 = (n0 * i0 + D * n1 * i1) % p
        l1 = (n0 * i1 + n1 * i0) % p
        x3 = (l0 * l0 + D * l1 * l1 - 2 * x0) % p
        x3b = (2 * l0 * l1 - 2 * x1) % p
        d0, d1 = x0 - x3, x1 - x3b
        return (x3, x3b, (l0 * d0 + D * l1 * d1 - y0) % p, (l0 * d1 + l1 * d0 - y1) % p)

    def add(self, P: FPoint, Q: FPoint) -> FPoint:
        if P is None:
            return Q
        if Q is None:
            return P
        p, D = self.p, self.D
        x0, x1, y0, y1 = P
        u0, u1, v0, v1 = Q
        if x0 == u0 and x1 == u1:
            if y0 == v0 and y1 == v1:
                return self.dbl(P)
            return None
        n0, n1 = v0 - y0, v1 - y1
        e0, e1 = u0 - x0, u1 - x1
        inv = pow((e0 * e0 - D * e1 * e1) % p, -1, p)
        i0, i1 = e0 * inv, -e1 * inv
        l0 = (n0 * i0 + D * n1 * i1) % p
        l1 = (n0 * i1 + n1 * i0) % p
        x3 = (l0 * l0 + D * l1 * l1 - x0 - u0) % p
        x3b = (2 * l0 * l1 - x1 - u1) % p
        d0, d1 = x0 - x3, x1 - x3b
        return (x3, x3b, (l0 * d0 + D * l1 * d1 - y0) % p, (l0 * d1 + l1 * d0 - y1) % p)

    def mul(self, P: FPoint, m: int) -> FPoint:
        if m < 0:
            P, m = self.neg(P), -m
        R = None
        add, dbl = self.add, self.dbl
        for bit in bin(m)[2:] if m else ():
            R = dbl(R)
            if bit == "1":
                R = add(R, P)
        return R

    def psi(self, P: FPoint) -> FPoint:
        """Same rational map as ``families.psi``."""
        if P is None:
            return None
        p, D = self.p, self.D

        def mul(a, b):
            return ((a[0] * b[0] + D * a[1] * b[1]) % p, (a[0] * b[1] + a[1] * b[0]) % p)

        def inv(a):
            n = pow((a[0] * a[0] - D * a[1] * a[1]) % p, -1, p)
            return (a[0] * n % p, -a[1] * n % p)

        X = mul((P[0], -P[1] % p), self._xin)
        Y = mul((P[2], -P[3] % p), self._ys)
        d = self._d
        if d == 1:
            x = mul(X, self._xout)
            return (x[0], x[1], Y[0], Y[1])
        if d == 2:
            nh, Cp, mdi = self._k
            w = ((X[0] - 4) % p, X[1])
            if w == (0, 0):
                return None
            wi = inv(w)
            q = mul(Cp, wi)
            t = mul(nh, X)
            fx = ((t[0] - q[0]) % p, (t[1] - q[1]) % p)
            g = mul(q, wi)
            gy = mul(((nh[0] + g[0]) % p, (nh[1] + g[1]) % p), mdi)
        else:
            nt, c1, c2, c3, mdi = self._k
            w = ((X[0] - 3) % p, X[1])
            if w == (0, 0):
                return None
            wi = inv(w)
            wi2 = mul(wi, wi)
            a = mul(nt, X)
            b = mul(c1, wi)
            c = mul(c2, wi2)
            fx = ((a[0] - b[0] - c[0]) % p, (a[1] - b[1] - c[1]) % p)
            e = mul(c1, wi2)
            f = mul(c3, mul(wi2, wi))
            gy = mul(((nt[0] + e[0] + f[0]) % p, (nt[1] + e[1] + f[1]) % p), mdi)
        x = mul(fx, self._xout)
        y = mul(Y, gy)
        return (x[0], x[1], y[0], y[1])
