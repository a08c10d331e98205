from __future__ import annotations

import pytest

from pqht.hough import default_3x3_patterns, used_pixels
from pqht.oracle import full_truth_table

# one line per acceptance criterion, printed after the run so the verdicts
# survive pytest's output capture
_ACCEPTANCE_LINES: list[str] = []


def record_acceptance(line: str) -> None:
    _ACCEPTANCE_LINES.append(line)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in _ACCEPTANCE_LINES:
        terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def patterns():
    return default_3x3_patterns()


@pytest.fixture(scope="session")
def pixel_order(patterns):
    return used_pixels(patterns)


@pytest.fixture(scope="session")
def truth_table(patterns):
    return full_truth_table(patterns)
