import random

import pytest
import sympy
from hypothesis import given, strategies as st

from qcurves.arith import (
    FieldCtx,
    FieldMismatchError,
    decode_fp2,
    decode_int,
    default_delta,
    encode_fp2,
    encode_int,
    find_nonsquare,
    fp2_inv,
    fp2_is_square,
    fp2_mul,
    fp2_sqrt,
    fp2_sqrt_tonelli,
    fp_sqrt,
    frobenius,
    is_probable_prime,
    legendre,
)

from conftest import P127, P255, P80

CTX11 = FieldCtx(11, 2)
BIG = [FieldCtx(P80, 2), FieldCtx(P127, -1), FieldCtx(P255, -2)]


def elems(ctx):
    p = ctx.p
    return st.builds(ctx, st.integers(0, p - 1), st.integers(0, p - 1))


class TestFieldCtx:
    def test_rejects_composite(self):
        with pytest.raises(ValueError):
            FieldCtx(15, 2)

    def test_rejects_square_delta(self):
        with pytest.raises(ValueError):
            FieldCtx(11, 3)  # 5^2 = 3 mod 11

    def test_rejects_small_p(self):
        with pytest.raises(ValueError):
            FieldCtx(3, 2)

    def test_default_delta_scan(self):
        assert default_delta(11) == -1
        assert default_delta(13) == 2
        assert default_delta(17) == 3
        for p in (11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47):
            assert legendre(default_delta(p), p) == -1

    def test_elements_cover_field(self):
        assert len(set(CTX11.elements())) == 121


class TestPrimality:
    def test_matches_sympy_small(self):
        for n in range(-5, 5000):
            assert is_probable_prime(n) == (n > 1 and sympy.isprime(n)), n

    @pytest.mark.parametrize("n", [P80, P127, P255, 730750818665451459101729015265709251634505119843])
    def test_known_primes(self, n):
        assert is_probable_prime(n, 64)

    def test_carmichael_and_products(self):
        for n in (561, 1105, 1729, 2465, 3215031751, P80 * P127):
            assert not is_probable_prime(n)


class TestLegendre:
    def test_trivial(self):
        assert legendre(0, 13) == 0
        assert legendre(1, 13) == 1

    def test_two_mod_seven(self):
        assert legendre(2, 7) == 1

    @pytest.mark.parametrize("p", [11, 13, 97])
    def test_matches_squares_table(self, p):
        squares = {a * a % p for a in range(1, p)}
        for n in range(1, p):
            assert legendre(n, p) == (1 if n in squares else -1)

    @given(st.integers(0, P80 - 1))
    def test_fp_sqrt(self, n):
        r = fp_sqrt(n, P80)
        if legendre(n, P80) == -1:
            assert r is None
        else:
            assert r * r % P80 == n and r <= P80 - r


class TestFp2Arith:
    def test_hand_product(self):
        assert fp2_mul(CTX11(3, 4), CTX11(5, 6)) == CTX11(8, 5)

    def test_unit_and_root(self):
        x = CTX11(7, 9)
        assert CTX11.one * x == x
        assert CTX11.u ** 2 == CTX11(2, 0)

    def test_inverse_exhaustive_search(self):
        x = CTX11(3, 4)
        found = [y for y in CTX11.elements() if x * y == 1]
        assert found == [fp2_inv(x)]
        assert fp2_inv(CTX11.one) == 1 and fp2_inv(CTX11(-1)) == -1

    def test_zero_inverse(self):
        with pytest.raises(ZeroDivisionError):
            fp2_inv(CTX11.zero)

    def test_context_mismatch(self):
        with pytest.raises(FieldMismatchError):
            CTX11(1, 1) + FieldCtx(13, 2)(1, 1)

    @given(st.data())
    def test_field_axioms(self, data):
        for ctx in (CTX11, *BIG):
            a, b, c = (data.draw(elems(ctx)) for _ in range(3))
            assert (a + b) * c == a * c + b * c
            assert (a * b) * c == a * (b * c)
            assert a - a == 0
            if a:
                assert a * a.inverse() == 1
                assert (b / a) * a == b

    @given(st.data())
    def test_frobenius_is_p_power(self, data):
        for ctx in (CTX11, BIG[0]):
            x = data.draw(elems(ctx))
            assert frobenius(x) == x ** ctx.p
            assert frobenius(frobenius(x)) == x
            assert x.norm() == (x * frobenius(x)).a0

    def test_frobenius_examples(self):
        assert frobenius(CTX11(5, 0)) == CTX11(5, 0)
        assert frobenius(CTX11(0, 3)) == CTX11(0, 8)


class TestSqrt:
    def test_trivial_roots(self):
        assert fp2_sqrt(CTX11.zero) == 0
        assert fp2_sqrt(CTX11.one) == 1

    def test_exhaustive_p11(self):
        squares = {}
        for y in CTX11.elements():
            squares.setdefault(y * y, set()).add(y)
        for x in CTX11.elements():
            r = fp2_sqrt(x)
            assert fp2_is_square(x) == (x in squares)
            if x in squares:
                assert r in squares[x]
                assert fp2_sqrt_tonelli(x) == r
            else:
                assert r is None

    def test_minus_two_at_p11(self):
        r = fp2_sqrt(CTX11(-2))
        assert r * r == -2

    @given(st.data())
    def test_large_fields_agree_with_tonelli(self, data):
        ctx = BIG[0]
        y = data.draw(elems(ctx))
        x = y * y
        r = fp2_sqrt(x)
        assert r in (y, -y)
        assert fp2_sqrt_tonelli(x) == r

    @pytest.mark.parametrize("ctx", BIG, ids=["p80", "p127", "p255"])
    def test_big_squares(self, ctx):
        rng = random.Random(ctx.p)
        for _ in range(50):
            y = ctx.random(rng)
            r = fp2_sqrt(y * y)
            assert r * r == y * y

    def test_nonsquare(self):
        mu = find_nonsquare(CTX11)
        assert not fp2_is_square(mu)
        assert find_nonsquare(CTX11) == mu
        table = {y * y for y in CTX11.elements()}
        # first candidate in scan order u, 1+u, 2+u, ... outside the table of squares
        first = next(CTX11(k, 1) for k in range(11) if CTX11(k, 1) not in table)
        assert mu == first


class TestEncoding:
    @given(st.integers(-(2**300), 2**300))
    def test_int_roundtrip(self, n):
        assert decode_int(encode_int(n)) == n

    def test_int_forms(self):
        assert decode_int("0x1F") == 31 and decode_int("-ff") == -255
        with pytest.raises(ValueError):
            decode_int("")

    @given(st.data())
    def test_fp2_roundtrip(self, data):
        for ctx in (CTX11, *BIG):
            x = data.draw(elems(ctx))
            assert decode_fp2(encode_fp2(x), ctx) == x

    def test_fp2_rejects_unreduced(self):
        with pytest.raises(ValueError):
            decode_fp2("b+0*u", CTX11)
