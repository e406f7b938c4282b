import random

import pytest

from qcurves.arith import FieldCtx, default_delta
from qcurves.curve import scalar_mul
from qcurves.counting import (
    AmbiguousRecovery,
    OrderCertificate,
    bsgs_candidates,
    bsgs_recover_r,
    certificate_from_r,
    closed_form_j,
    count_by_enumeration,
    exhaustive_count,
    factor_small,
    j_census,
    verify_certificate,
)
from qcurves.families import build_e2, build_e3, build_family, kernel_points, order3_point

from conftest import N1, N1_TWIST, P80, S1

TINY = [11, 13, 19, 23]


def ctx_for(p):
    return FieldCtx(p, default_delta(p))


class TestExhaustive:
    @pytest.mark.parametrize("p", [11, 13])
    def test_matches_pair_enumeration(self, p):
        ctx = ctx_for(p)
        for d in (2, 3):
            for s in range(0, p, 3):
                for tw in (False, True):
                    F = build_family(ctx, d, s, tw)
                    assert exhaustive_count(F).order == count_by_enumeration(F.curve)

    @pytest.mark.parametrize("p", TINY)
    def test_hasse_and_twist_sum(self, p):
        ctx = ctx_for(p)
        for d in (2, 3):
            for s in range(p):
                a = exhaustive_count(build_family(ctx, d, s)).order
                b = exhaustive_count(build_family(ctx, d, s, True)).order
                assert abs(a - (p * p + 1)) <= 2 * p
                assert a + b == 2 * (p * p + 1)

    def test_p11_delta2_s1(self):
        c = exhaustive_count(build_e2(FieldCtx(11, 2), 1))
        assert c.order % 2 == 0
        assert c.order == c.N * c.cofactor and c.t == 11 ** 2 + 1 - c.order

    @pytest.mark.parametrize("p", TINY)
    def test_divisibility(self, p):
        ctx = ctx_for(p)
        for s in range(p):
            assert exhaustive_count(build_e3(ctx, s)).order % 3 == 0
            a = exhaustive_count(build_e2(ctx, s)).order
            b = exhaustive_count(build_e2(ctx, s, True)).order
            assert a % 2 == 0 and b % 2 == 0
            if p % 3 == 2:
                assert (a % 3 == 0) != (b % 3 == 0)

    @pytest.mark.parametrize("p", TINY)
    def test_r_exists(self, p):
        ctx = ctx_for(p)
        for d in (2, 3):
            for s in range(p):
                for tw in (False, True):
                    F = build_family(ctx, d, s, tw)
                    c = exhaustive_count(F)
                    assert d * c.r ** 2 == 2 * p + F.eps * c.t

    def test_guard(self, ctx80):
        with pytest.raises(ValueError):
            exhaustive_count(build_e2(ctx80, 1))

    def test_plain_curve(self):
        F = build_e2(ctx_for(11), 2)
        c = exhaustive_count(F.curve)
        assert c.r is None and c.order == exhaustive_count(F).order

    def test_factor_small(self):
        assert factor_small(2 * 2 * 3 * 97) == [2, 2, 3, 97]
        assert factor_small(1) == []


class TestBsgs:
    @pytest.mark.parametrize("p", [11, 13])
    def test_matches_exhaustive(self, p):
        ctx = ctx_for(p)
        for d in (2, 3):
            for s in range(p):
                for tw in (False, True):
                    F = build_family(ctx, d, s, tw)
                    assert bsgs_recover_r(F, rng=random.Random(s)) == exhaustive_count(F).r

    def test_kernel_point_is_ambiguous(self):
        ctx = ctx_for(11)
        for s in range(11):
            F = build_e2(ctx, s)
            K = kernel_points(F)[0]
            # psi(K) = O, so every k in range fits
            assert len(bsgs_candidates(F, K)) > 1
            with pytest.raises(AmbiguousRecovery):
                bsgs_recover_r(F, K)
            F3 = build_e3(ctx, s)
            with pytest.raises(AmbiguousRecovery):
                bsgs_recover_r(F3, order3_point(F3))

    def test_explicit_point(self):
        F = build_e2(ctx_for(23), 5)
        r = exhaustive_count(F).r
        rng = random.Random(0)
        for _ in range(10):
            P = F.random_point(rng)
            try:
                assert bsgs_recover_r(F, P, rng) == r
            except AmbiguousRecovery:
                pass

    def test_moderate_size(self):
        # 2^31-1 is inert in Q(sqrt(-1)); sqrt(range) is a few hundred steps
        p = 2**31 - 1
        ctx = FieldCtx(p, -1)
        F = build_e2(ctx, 12345)
        r = bsgs_recover_r(F, rng=random.Random(1))
        cert = certificate_from_r(F, r, N=None)
        rng = random.Random(2)
        for _ in range(5):
            assert scalar_mul(F.random_point(rng), cert.order).is_infinity
        assert 2 * r * r == 2 * p + F.eps * cert.t

    @pytest.mark.slow
    def test_example1(self, ctx80):
        F = build_e2(ctx80, S1)
        r = bsgs_recover_r(F, rng=random.Random(3))
        assert certificate_from_r(F, r, N=N1).order == 2 * N1


class TestVerify:
    def test_example1(self, ex1, ex1_twist):
        for F, n in ((ex1, N1), (ex1_twist, N1_TWIST)):
            P = F.params
            cert = OrderCertificate(P.order, n, 2, P.r, P.trace)
            assert verify_certificate(F, cert, 30, random.Random(1))

    def test_wrong_order_rejected(self, ex1):
        P = ex1.params
        bad = OrderCertificate(P.order + 2, (P.order + 2) // 2, 2, P.r, P.trace - 2)
        assert not verify_certificate(ex1, bad, 10)
        swapped = OrderCertificate(P.order, N1, 2, -P.r, P.trace)
        assert not verify_certificate(ex1, swapped, 10)

    def test_twist_certificate_on_curve_rejected(self, ex1, ex1_twist):
        P = ex1_twist.params
        assert not verify_certificate(ex1, OrderCertificate(P.order, N1_TWIST, 2, P.r, P.trace), 10)

    @pytest.mark.parametrize("p", [11, 13])
    def test_exhaustive_certificates(self, p):
        ctx = ctx_for(p)
        seen = 0
        for d in (2, 3):
            for s in range(p):
                for tw in (False, True):
                    F = build_family(ctx, d, s, tw)
                    c = exhaustive_count(F)
                    if c.N > 3 and c.order % (c.N * c.N) and c.r % c.N:
                        assert verify_certificate(F, c, 10, random.Random(s))
                        seen += 1
        assert seen


class TestCensus:
    @pytest.mark.parametrize("p", [11, 13, 19, 23, 29])
    def test_bounds(self, p):
        ctx = ctx_for(p)
        c2, c3 = j_census(ctx, 2), j_census(ctx, 3)
        assert c2.distinct >= p - 3 and c3.distinct >= p - 8
        assert c2.closed_form_ok and c3.closed_form_ok

    def test_closed_forms_large(self, ctx80):
        rng = random.Random(0)
        for _ in range(20):
            for d in (2, 3):
                F = build_family(ctx80, d, rng.randrange(P80))
                assert closed_form_j(F) == F.curve.j_invariant()

    def test_guard(self, ctx80):
        with pytest.raises(ValueError):
            j_census(ctx80, 2)
