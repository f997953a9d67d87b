import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from nearassoc import AlgebraSC, PrimeField
from nearassoc.classify2d import enumerate_indices_fp, tables_from_indices

settings.register_profile(
    "default", deadline=None, suppress_health_check=[HealthCheck.too_slow], derandomize=True
)
settings.load_profile("default")

# Filled in by test_acceptance.py, one line per criterion.
ACCEPTANCE_LINES = {}


def _all_tables(p):
    ctx = PrimeField(p)
    idx = np.arange(p**8, dtype=np.int64)
    return [AlgebraSC(ctx, c) for c in tables_from_indices(idx, 2, p)]


def _nearly_associative(p):
    ctx = PrimeField(p)
    idx = enumerate_indices_fp(2, p, "nearly-associative", threads=1)
    return [AlgebraSC(ctx, c) for c in tables_from_indices(idx, 2, p)]


@pytest.fixture(scope="session")
def f2_tables():
    return _all_tables(2)


@pytest.fixture(scope="session")
def f3_tables():
    return _all_tables(3)


@pytest.fixture(scope="session")
def f2_na():
    return _nearly_associative(2)


@pytest.fixture(scope="session")
def f3_na():
    return _nearly_associative(3)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])
