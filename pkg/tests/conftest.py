import pytest

from oracles import SymOracle

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def s4_oracle():
    return SymOracle(4)


@pytest.fixture(scope="session")
def s5_oracle():
    return SymOracle(5)


@pytest.fixture(scope="session")
def s6_oracle():
    return SymOracle(6)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
