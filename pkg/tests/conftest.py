import sys
import numpy as np
import pytest
from hypothesis import settings

from muskatlab import Grid, RealField
from muskatlab.estimator import EnsembleSpec, random_field

settings.register_profile("default", max_examples=25, deadline=None)
settings.load_profile("default")


@pytest.fixture(scope="session")
def grid():
    return Grid()


@pytest.fixture(scope="session")
def small_grid():
    return Grid(np.pi, 256)


@pytest.fixture(scope="session")
def ensemble(grid):
    spec = EnsembleSpec(count=6)
    return [random_field(spec, i, grid) for i in range(spec.count)]


def band_limited(grid, rng, k_lo=1, k_hi=16, decay=1.5):
    k = np.arange(k_lo, k_hi + 1)
    amp = rng.uniform(0.5, 1.5, k.size) * k ** -decay
    ph = rng.uniform(0, 2 * np.pi, k.size)
    return RealField(grid, amp @ np.cos(np.outer(k, grid.x) + ph[:, None]))


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
