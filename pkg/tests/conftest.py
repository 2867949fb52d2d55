"""Shared test plumbing: collects acceptance verdict lines for the summary."""

import pytest

ACCEPTANCE_LINES = []


@pytest.fixture
def criterion_report():
    """Record one PASS/FAIL line; echoed in the terminal summary."""

    def _report(line: str) -> None:
        ACCEPTANCE_LINES.append(line)
        print(line)

    return _report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
