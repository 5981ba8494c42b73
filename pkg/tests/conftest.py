import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from htriang.cli import bundled_examples  # noqa: E402
from htriang.complex import parse_htriangulation  # noqa: E402
from htriang.isomap import setup  # noqa: E402

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def examples():
    return {e.name: parse_htriangulation(e.text) for e in bundled_examples()}


@pytest.fixture(scope="session")
def setups(examples):
    return {name: setup(tr) for name, tr in examples.items()}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
