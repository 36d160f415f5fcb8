import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from linkweights.repro import fixture_dir  # noqa: E402

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def fixtures():
    return fixture_dir()


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
