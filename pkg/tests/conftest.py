import pytest

from eberhard.fixtures import published_rounds, published_totals


@pytest.fixture
def rounds():
    return published_rounds()


@pytest.fixture
def totals():
    return published_totals()


def pytest_terminal_summary(terminalreporter):
    import test_acceptance

    if test_acceptance.VERDICTS:
        terminalreporter.section("acceptance criteria")
        for k in sorted(test_acceptance.VERDICTS):
            terminalreporter.write_line(test_acceptance.VERDICTS[k])
