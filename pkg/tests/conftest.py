import sys

import pytest

from unihardy import radial
from unihardy.functionals import HardyParams


@pytest.fixture
def bump_r():
    """Smooth compactly supported test function used throughout."""
    return radial.Product((radial.Bump(0.2, 0.8), radial.PowerR(1.0)))


@pytest.fixture
def bump():
    return radial.Bump(0.2, 0.8)


@pytest.fixture
def base_params():
    return HardyParams(Q=4.0, p=2.0, a=1.0, b=2.0, c=1.0)


def pytest_terminal_summary(terminalreporter):
    """Print the one-line verdict of every acceptance criterion that ran."""
    module = sys.modules.get("test_acceptance")
    lines = [module.VERDICTS[k] for k in sorted(module.VERDICTS)] if module else []
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
