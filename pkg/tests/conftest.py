import pytest

from helpers import ACCEPTANCE_RESULTS, fixture_graphs


@pytest.fixture(scope="session")
def small_fixtures():
    return fixture_graphs(10)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}")
