import pytest

from support import ACCEPTANCE
from zklp.geo import generate_corpus


@pytest.fixture(scope="session")
def corpus():
    """The full 16 x 16 x 100 location corpus for seed 0."""
    return generate_corpus(0)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
