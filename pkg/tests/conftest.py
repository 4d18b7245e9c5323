import numpy as np
import pytest

from darkfloquet import FIG2, FIG3, FIG4


@pytest.fixture
def fig2():
    return FIG2


@pytest.fixture
def fig3():
    return FIG3


@pytest.fixture
def fig4():
    return FIG4


@pytest.fixture
def rng():
    return np.random.default_rng(20081)


def pytest_terminal_summary(terminalreporter):
    from helpers import ACCEPTANCE_LINES

    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
