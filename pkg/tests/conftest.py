import pytest

import shared


@pytest.fixture(scope="session", params=shared.CATALOG)
def catalog_name(request):
    return request.param


@pytest.fixture(scope="session")
def prm():
    return shared.metric("prm")


@pytest.fixture(scope="session")
def gprm():
    return shared.metric("gprm")


def pytest_terminal_summary(terminalreporter):
    try:
        import test_acceptance
    except ImportError:
        return
    lines = test_acceptance.summary_lines()
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
