"""Shared test configuration: collects acceptance-criterion pass/fail
lines and re-emits them in the terminal summary so they are visible even
with output capture on."""

import pytest

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def record_criterion():
    """Record one pass/fail line for an acceptance criterion, then assert."""
    def record(num: int, label: str, ok: bool, detail: str):
        ACCEPTANCE_LINES.append(
            f"criterion {num} [{label}]: "
            f"{'PASS' if ok else 'FAIL'} ({detail})")
        assert ok, f"criterion {num} [{label}]: {detail}"
    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
