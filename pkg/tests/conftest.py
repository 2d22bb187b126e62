import pytest

from exact_stirling import PrecisionPolicy

# filled by test_acceptance.py, printed once at the end of the run
CRITERIA_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if CRITERIA_LINES:
        terminalreporter.section("acceptance criteria")
        for line in CRITERIA_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def policy():
    return PrecisionPolicy(30, 20)
