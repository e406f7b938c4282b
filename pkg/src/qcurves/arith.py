"""Prime field and quadratic extension field arithmetic.

Elements of F_p^2 = F_p(sqrt(delta)) are stored as pairs ``(a0, a1)`` of
integers reduced mod p, standing for ``a0 + a1*u`` with ``u**2 == delta``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterator, Optional

SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97)


class FieldMismatchError(ValueError):
    """Operands live in different fields."""


def is_probable_prime(n: int, rounds: int = 64) -> bool:
    """Miller-Rabin with ``rounds`` bases drawn from a generator seeded by ``n``."""
    if n < 2:
        return False
    for q in SMALL_PRIMES:
        if n == q:
            return True
        if n % q == 0:
            return False
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    rng = random.Random(n)
    for _ in range(rounds):
        a = rng.randrange(2, n - 1)
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def legendre(n: int, p: int) -> int:
    """Legendre symbol (n/p) for an odd prime p, as -1, 0 or 1."""
    n %= p
    if n == 0:
        return 0
    return 1 if pow(n, (p - 1) // 2, p) == 1 else -1


def fp_sqrt(n: int, p: int) -> Optional[int]:
    """Square root in F_p (Tonelli-Shanks), or None for a nonsquare.

    Of the two roots the smaller integer is returned.
    """
    n %= p
    if n == 0:
        return 0
    if legendre(n, p) != 1:
        return None
    if p % 4 == 3:
        r = pow(n, (p + 1) // 4, p)
    else:
        q, s = p - 1, 0
        while q % 2 == 0:
            q //= 2
            s += 1
        z = 2
        while legendre(z, p) != -1:
            z += 1
        m, c, t, r = s, pow(z, q, p), pow(n, q, p), pow(n, (q + 1) // 2, p)
        while t != 1:
            i, t2 = 0, t
            while t2 != 1:
                t2 = t2 * t2 % p
                i += 1
            b = pow(c, 1 << (m - i - 1), p)
            m, c = i, b * b % p
            t, r = t * c % p, r * b % p
    return min(r, p - r)


@dataclass(frozen=True)
class FieldCtx:
    """The field F_p(sqrt(delta)) for an odd prime p > 3 and nonsquare delta."""

    p: int
    delta: int
    _d: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.p <= 3:
            raise ValueError(f"p must be a prime > 3, got {self.p}")
        if not is_probable_prime(self.p):
            raise ValueError(f"p = {self.p} is not prime")
        if legendre(self.delta, self.p) != -1:
            raise ValueError(f"delta = {self.delta} is not a nonsquare mod p")
        object.__setattr__(self, "_d", self.delta % self.p)

    def __call__(self, a0: int = 0, a1: int = 0) -> "Fp2Elem":
        return Fp2Elem(a0, a1, self)

    @property
    def zero(self) -> "Fp2Elem":
        return Fp2Elem(0, 0, self)

    @property
    def one(self) -> "Fp2Elem":
        return Fp2Elem(1, 0, self)

    @property
    def u(self) -> "Fp2Elem":
        """The generator sqrt(delta)."""
        return Fp2Elem(0, 1, self)

    def random(self, rng: random.Random) -> "Fp2Elem":
        return Fp2Elem(rng.randrange(self.p), rng.randrange(self.p), self)

    def elements(self) -> Iterator["Fp2Elem"]:
        p = self.p
        for a1 in range(p):
            for a0 in range(p):
                yield Fp2Elem(a0, a1, self)


def default_delta(p: int) -> int:
    """Smallest-magnitude nonsquare mod p, scanning -1, 2, -2, 3, -3, ..."""
    if legendre(-1, p) == -1:
        return -1
    n = 2
    while True:
        for c in (n, -n):
            if legendre(c, p) == -1:
                return c
        n += 1


class Fp2Elem:
    """Element a0 + a1*u of F_p^2; treated as immutable."""

    __slots__ = ("a0", "a1", "ctx")

    def __init__(self, a0: int, a1: int, ctx: FieldCtx):
        p = ctx.p
        self.a0 = a0 % p
        self.a1 = a1 % p
        self.ctx = ctx

    def _coerce(self, other) -> "Fp2Elem":
        if isinstance(other, Fp2Elem):
            if other.ctx is not self.ctx and other.ctx != self.ctx:
                raise FieldMismatchError("operands belong to different fields")
            return other
        if isinstance(other, int):
            return Fp2Elem(other, 0, self.ctx)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Fp2Elem(self.a0 + o.a0, self.a1 + o.a1, self.ctx)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Fp2Elem(self.a0 - o.a0, self.a1 - o.a1, self.ctx)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __neg__(self):
        return Fp2Elem(-self.a0, -self.a1, self.ctx)

    def __mul__(self, other):
        if isinstance(other, int):
            return Fp2Elem(self.a0 * other, self.a1 * other, self.ctx)
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        a0, a1, b0, b1 = self.a0, self.a1, o.a0, o.a1
        return Fp2Elem(a0 * b0 + self.ctx._d * a1 * b1, a0 * b1 + a1 * b0, self.ctx)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = self.ctx.one
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            return self.a1 == 0 and self.a0 == other % self.ctx.p
        if not isinstance(other, Fp2Elem):
            return NotImplemented
        return (
            self.a0 == other.a0
            and self.a1 == other.a1
            and (self.ctx is other.ctx or self.ctx == other.ctx)
        )

    def __hash__(self):
        return hash((self.a0, self.a1, self.ctx.p))

    def __bool__(self):
        return bool(self.a0 or self.a1)

    def __repr__(self):
        return f"Fp2Elem({self.a0}, {self.a1}, p={self.ctx.p})"

    def __str__(self):
        return encode_fp2(self)

    def norm(self) -> int:
        """a0^2 - delta*a1^2, the norm to F_p."""
        return (self.a0 * self.a0 - self.ctx._d * self.a1 * self.a1) % self.ctx.p

    def conj(self) -> "Fp2Elem":
        return Fp2Elem(self.a0, -self.a1, self.ctx)

    def inverse(self) -> "Fp2Elem":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero in F_p^2")
        ninv = pow(n, -1, self.ctx.p)
        return Fp2Elem(self.a0 * ninv, -self.a1 * ninv, self.ctx)

    def is_square(self) -> bool:
        return fp2_is_square(self)

    def sqrt(self) -> Optional["Fp2Elem"]:
        return fp2_sqrt(self)

    def in_base_field(self) -> bool:
        return self.a1 == 0


def fp2_mul(x: Fp2Elem, y: Fp2Elem) -> Fp2Elem:
    if x.ctx != y.ctx:
        raise FieldMismatchError("operands belong to different fields")
    return x * y


def fp2_inv(x: Fp2Elem) -> Fp2Elem:
    return x.inverse()


def frobenius(x: Fp2Elem) -> Fp2Elem:
    """The p-power map a0 + a1*u -> a0 - a1*u."""
    return x.conj()


def fp2_is_square(x: Fp2Elem) -> bool:
    # x^((p^2-1)/2) == norm(x)^((p-1)/2)
    if not x:
        return True
    return legendre(x.norm(), x.ctx.p) == 1


def canonical_root(r: Fp2Elem) -> Fp2Elem:
    """Pick the root among +-r with the smaller (a1, a0) pair."""
    m = -r
    return r if (r.a1, r.a0) <= (m.a1, m.a0) else m


def fp2_sqrt(x: Fp2Elem) -> Optional[Fp2Elem]:
    """Canonical square root of x, or None when x is a nonsquare.

    Reduces to square roots in F_p through the norm map.
    """
    ctx = x.ctx
    p, dl = ctx.p, ctx._d
    if not x:
        return ctx.zero
    a, b = x.a0, x.a1
    if b == 0:
        r = fp_sqrt(a, p)
        if r is not None:
            return canonical_root(Fp2Elem(r, 0, ctx))
        # a nonsquare in F_p: a/delta is a square, root lies on the u-axis
        r = fp_sqrt(a * pow(dl, -1, p), p)
        return canonical_root(Fp2Elem(0, r, ctx))
    alpha = fp_sqrt(x.norm(), p)
    if alpha is None:
        return None
    half = (p + 1) // 2
    c2 = (a + alpha) * half % p
    c = fp_sqrt(c2, p)
    if c is None:
        c = fp_sqrt((a - alpha) * half % p, p)
    e = b * pow(2 * c, -1, p)
    return canonical_root(Fp2Elem(c, e, ctx))


def fp2_sqrt_tonelli(x: Fp2Elem) -> Optional[Fp2Elem]:
    """Tonelli-Shanks run directly in the multiplicative group of F_{p^2}.

    Slower than ``fp2_sqrt`` for p = 2^k - 1 (2-adic valuation of p^2 - 1
    is large) but independent of the norm reduction.
    """
    ctx = x.ctx
    if not x:
        return ctx.zero
    q = ctx.p * ctx.p
    if not fp2_is_square(x):
        return None
    qq, s = q - 1, 0
    while qq % 2 == 0:
        qq //= 2
        s += 1
    z = find_nonsquare(ctx)
    m, c, t, r = s, z ** qq, x ** qq, x ** ((qq + 1) // 2)
    one = ctx.one
    while t != one:
        i, t2 = 0, t
        while t2 != one:
            t2 = t2 * t2
            i += 1
        b = c ** (1 << (m - i - 1))
        m, c = i, b * b
        t, r = t * c, r * b
    return canonical_root(r)


def find_nonsquare(ctx: FieldCtx) -> Fp2Elem:
    """First nonsquare in the scan u, 1 + u, 2 + u, ..."""
    c = 0
    while True:
        cand = Fp2Elem(c, 1, ctx)
        if not fp2_is_square(cand):
            return cand
        c += 1


def encode_int(n: int) -> str:
    return ("-" if n < 0 else "") + format(abs(n), "x")


def decode_int(text: str) -> int:
    text = text.strip().lower()
    if text.startswith("-"):
        return -decode_int(text[1:])
    if text.startswith("0x"):
        text = text[2:]
    if not text:
        raise ValueError("empty integer literal")
    return int(text, 16)


def encode_fp2(x: Fp2Elem) -> str:
    return f"{x.a0:x}+{x.a1:x}*u"


def decode_fp2(text: str, ctx: FieldCtx) -> Fp2Elem:
    text = text.strip().lower().replace(" ", "")
    if not text.endswith("*u") or "+" not in text:
        raise ValueError(f"malformed F_p^2 literal: {text!r}")
    a0, a1 = text[:-2].rsplit("+", 1)
    x0, x1 = decode_int(a0), decode_int(a1)
    if not (0 <= x0 < ctx.p and 0 <= x1 < ctx.p):
        raise ValueError(f"F_p^2 literal not reduced: {text!r}")
    return Fp2Elem(x0, x1, ctx)
