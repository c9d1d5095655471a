import pytest

from sivalley.dot import DotSpec

SMALL = (4, 4, 6)


@pytest.fixture(scope="session")
def small_modes():
    return SMALL


@pytest.fixture(scope="session")
def default_spec():
    return DotSpec()


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for key in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[key])
