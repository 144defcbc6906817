import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from svdcomplex.samples import small_complex

settings.register_profile(
    "default",
    max_examples=40,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

_ACCEPTANCE_LINES = []


@pytest.fixture
def golden_qq():
    return small_complex("QQ")


@pytest.fixture
def golden():
    return small_complex("R53")


@pytest.fixture
def report():
    """Record one PASS/FAIL line for the acceptance summary."""

    def _report(number, ok, detail):
        line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
        _ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return _report


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE_LINES):
            terminalreporter.write_line(line)


def random_int_matrix(rng, rows, cols, rank=None, bound=5):
    """Integer matrix; with ``rank`` given, a product of ``rows x rank`` and ``rank x cols`` factors."""
    if rank is None:
        return rng.integers(-bound, bound + 1, size=(rows, cols))
    return rng.integers(-bound, bound + 1, size=(rows, rank)) @ rng.integers(-bound, bound + 1, size=(rank, cols))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_shape(seed, cmax=30, max_rank=10, max_h=4):
    """Random ``(h, r)`` with ``1 <= n <= 4`` and every dimension at most ``cmax``."""
    from svdcomplex.generators import dims_from_ranks

    g = np.random.default_rng(seed)
    while True:
        n = int(g.integers(1, 5))
        r = [int(x) for x in g.integers(0, max_rank + 1, n)]
        h = [int(x) for x in g.integers(0, max_h + 1, n + 1)]
        if max(dims_from_ranks(h, r)) <= cmax:
            return h, r
