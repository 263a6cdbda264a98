import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from koszulk3 import gradedring  # noqa: E402


@pytest.fixture(autouse=True)
def _no_disk_cache():
    gradedring.set_cache(None)
    yield
    gradedring.set_cache(None)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
