import pytest
from hypothesis import settings

from toric_periods import SpectralParams, build_toric_data
from toric_periods.datasets import P1, P1xP1, P2, POINT, STACKED

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

_ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance_log():
    return _ACCEPTANCE_LINES.append


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def p1():
    return build_toric_data(P1)


@pytest.fixture(scope="session")
def p2():
    return build_toric_data(P2)


@pytest.fixture(scope="session")
def p1xp1():
    return build_toric_data(P1xP1)


@pytest.fixture(scope="session")
def stacked():
    return build_toric_data(STACKED)


@pytest.fixture(scope="session")
def point():
    return build_toric_data(POINT)


@pytest.fixture
def zero_params():
    def make(N):
        return SpectralParams((0,) * N)
    return make
