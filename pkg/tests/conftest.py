import numpy as np
import pytest

from adiabatic.states import StatePoint


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def eq_point(name, value=None, space="main"):
    coords = () if value is None else (value,)
    return StatePoint(space, coords, True, name)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
