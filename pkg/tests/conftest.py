import random

import pytest
from hypothesis import HealthCheck, settings

from qcurves.arith import FieldCtx
from qcurves.families import build_family, endo_params

settings.register_profile("default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

P80 = 2**80 - 93
N1 = 730750818665451459101729015265709251634505119843
N1_TWIST = 730750818665451459101730957248125446994932083047
S1 = 4556

P127 = 2**127 - 1
S2 = 122912611041315220011572494331480107107
P255 = 2**255 - 19
S3 = 0x7516D419C4937E5E8F0761FDB9BB0382FE20E9D0B7AB6924BA1DA02561C5145E


@pytest.fixture(scope="session")
def ctx11():
    return FieldCtx(11, 2)


@pytest.fixture(scope="session")
def ctx80():
    return FieldCtx(P80, 2)


@pytest.fixture(scope="session")
def ex1(ctx80):
    F = build_family(ctx80, 2, S1)
    return F.with_params(endo_params(F, 2 * N1, N1, random.Random(1)))


@pytest.fixture(scope="session")
def ex1_twist(ctx80):
    F = build_family(ctx80, 2, S1, twisted=True)
    return F.with_params(endo_params(F, 2 * N1_TWIST, N1_TWIST, random.Random(1)))


@pytest.fixture
def rng():
    return random.Random(12345)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for num, title, ok, dt, detail in sorted(RESULTS, key=lambda r: r[0]):
        tr.write_line(f"criterion {num}: {'PASS' if ok else 'FAIL'}  {title}  ({dt}){'  ' + detail if detail else ''}")
