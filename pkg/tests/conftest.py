"""Shared fixtures plus the acceptance-summary hook.

Acceptance tests register one line each; the summary prints them after the
run so the pass/fail ledger is visible even with captured output.
"""

ACCEPTANCE_LINES = []


def record_acceptance(number: int, ok: bool, detail: str) -> None:
    status = "PASS" if ok else "FAIL"
    ACCEPTANCE_LINES.append((number, f"[criterion {number:2d}] {status}  {detail}"))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(line)
