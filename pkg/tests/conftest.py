from pathlib import Path

import pytest

from termgraph.dag import Fun
from termgraph.syntax import parse_file

FIXTURE_FILE = Path(__file__).resolve().parent.parent / "fixtures" / "examples.tg"
SIG = (Fun("f", 2), Fun("g", 1), Fun("a", 0), Fun("b", 0))


@pytest.fixture(scope="session")
def ws():
    return parse_file(FIXTURE_FILE)


@pytest.fixture(scope="session")
def minimal(ws):
    return ws.precedence("minimal")


@pytest.fixture(scope="session")
def sharing(ws):
    return ws.precedence("sharing")


def node(g, name):
    """Node id of the node displayed as ``name``."""
    for n in g.nodes:
        if g.name(n) == name:
            return n
    raise KeyError(name)


# acceptance lines, filled in by test_acceptance and repeated at the end of the run
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
