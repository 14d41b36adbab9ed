"""Shared test reporting.

The acceptance tests register one result line each; the terminal-summary
hook reprints them as a block after the run, so the lines survive output
capture and land in piped logs.
"""

import pytest

_acceptance_lines: list[str] = []


@pytest.fixture(scope="session")
def acceptance_log():
    return _acceptance_lines


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if _acceptance_lines:
        terminalreporter.section("acceptance summary")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)
