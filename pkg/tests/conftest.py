import pytest

from bops.model import ModelParams

# filled by test_acceptance; printed once at the end of the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def base():
    """Numerical-example scale: c_o = 4, M = 7, high margin."""
    return ModelParams(p=10, c=4, c_o=4, k=1, M=7)


@pytest.fixture(scope="session")
def low_margin():
    return ModelParams(p=6, c=4, c_o=4, k=3, M=7)
