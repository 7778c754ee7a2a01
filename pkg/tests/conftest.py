import sys
import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("repo", deadline=None, derandomize=True,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("repo")


def line_points(xs):
    """Distance matrix of points on a line."""
    x = np.asarray(xs, dtype=float)
    return np.abs(x[:, None] - x[None, :])


@pytest.fixture
def line4():
    # gaps of exactly 0.3 so closed balls at 0.3 behave as in exact arithmetic
    return np.abs(np.subtract.outer(np.arange(4), np.arange(4))) * 0.3


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(mod.RESULTS, key=lambda l: int(l.split()[1].rstrip(":"))):
        terminalreporter.write_line(line)
