import random

import pytest
from hypothesis import given, strategies as st

from qcurves.arith import FieldCtx
from qcurves.curve import CurveMismatchError, OpCounter, scalar_mul
from qcurves.families import build_family, psi
from qcurves.multiexp import SubgroupError, mul_with_endo, straus

from conftest import N1


@pytest.fixture(scope="module")
def small():
    F = build_family(FieldCtx(11, 2), 2, 1)
    return F, list(F.curve.points())


def subgroup_point(F, rng):
    while True:
        P = scalar_mul(F.random_point(rng), F.params.cofactor)
        if not P.is_infinity:
            return P


class TestStraus:
    def test_trivial(self, small):
        F, pts = small
        P, Q = pts[3], pts[7]
        assert straus(P, Q, 0, 0).is_infinity
        for a in range(-20, 20):
            assert straus(P, Q, a, 0) == scalar_mul(P, a)

    def test_exhaustive_pairs(self, small):
        F, pts = small
        rng = random.Random(1)
        for _ in range(400):
            P, Q = rng.choice(pts), rng.choice(pts)
            a, b = rng.randrange(-200, 200), rng.randrange(-200, 200)
            expect = scalar_mul(P, a) + scalar_mul(Q, b)
            for w in (1, 2, 3):
                assert straus(P, Q, a, b, width=w) == expect

    def test_doubling_count(self, small):
        F, pts = small
        for a, b in [(1, 0), (0, 1), (5, 300), (-1023, 4), (1024, -1)]:
            c = OpCounter()
            straus(pts[2], pts[5], a, b, c)
            assert c.doublings == max(abs(a), abs(b)).bit_length()

    def test_mismatch(self, small):
        F, pts = small
        G = build_family(FieldCtx(11, 2), 2, 2)
        with pytest.raises(CurveMismatchError):
            straus(pts[2], list(G.curve.points())[2], 1, 1)

    def test_bad_width(self, small):
        with pytest.raises(ValueError):
            straus(small[1][1], small[1][2], 1, 1, width=0)


class TestMulWithEndo:
    def test_trivial(self, ex1):
        P = subgroup_point(ex1, random.Random(3))
        assert mul_with_endo(ex1, P, 0).is_infinity
        assert mul_with_endo(ex1, P, 1) == P
        assert mul_with_endo(ex1, P, N1).is_infinity

    def test_matches_baseline(self, ex1, ex1_twist):
        rng = random.Random(8)
        for F in (ex1, ex1_twist):
            P = subgroup_point(F, rng)
            for _ in range(100):
                m = rng.randrange(-F.params.N, 2 * F.params.N)
                assert mul_with_endo(F, P, m, check=False) == scalar_mul(P, m % F.params.N)

    @given(st.integers(0, N1 - 1))
    def test_property(self, ex1, m):
        P = subgroup_point(ex1, random.Random(0))
        assert mul_with_endo(ex1, P, m, check=False) == scalar_mul(P, m)

    def test_halves_doublings(self, ex1):
        rng = random.Random(11)
        P = subgroup_point(ex1, rng)
        ce, cb = OpCounter(), OpCounter()
        for _ in range(100):
            m = rng.randrange(N1)
            before = ce.doublings
            mul_with_endo(ex1, P, m, ce, check=False)
            assert ce.doublings - before <= 80
            scalar_mul(P, m, cb)
        assert ce.psi_evals == 100
        assert ce.doublings / cb.doublings <= 0.55

    def test_subgroup_check(self, ex1):
        rng = random.Random(5)
        P = ex1.random_point(rng)
        while scalar_mul(P, N1).is_infinity:
            P = ex1.random_point(rng)
        with pytest.raises(SubgroupError):
            mul_with_endo(ex1, P, 7)

    def test_psi_once(self, ex1):
        P = subgroup_point(ex1, random.Random(6))
        c = OpCounter()
        R = mul_with_endo(ex1, P, 123456789123456789, c)
        assert c.psi_evals == 1
        assert R == scalar_mul(P, 123456789123456789)
        assert psi(ex1, P) == scalar_mul(P, ex1.params.lam)
