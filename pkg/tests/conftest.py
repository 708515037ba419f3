import numpy as np
import pytest

from gate import LINES as ACCEPTANCE_LINES
from liftkit import make_2x2


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def fam0():
    """The exactly defective 2x2 family member."""
    return make_2x2(0.0)


@pytest.fixture
def rng():
    return np.random.default_rng(20261016)
