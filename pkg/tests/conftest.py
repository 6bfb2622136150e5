import pytest

from braidlab import parse_diagram
from oracles import DIAGRAMS


@pytest.fixture(params=sorted(DIAGRAMS))
def diagram(request):
    return parse_diagram(DIAGRAMS[request.param])


@pytest.fixture
def a2():
    return parse_diagram(DIAGRAMS["A2"])


@pytest.fixture
def a3():
    return parse_diagram(DIAGRAMS["A3"])


@pytest.fixture
def affine_a1():
    return parse_diagram(DIAGRAMS["Ã1"])


_ACCEPTANCE = pytest.StashKey[list]()


@pytest.fixture(scope="session")
def acceptance_log(request):
    return request.config.stash.setdefault(_ACCEPTANCE, [])


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
