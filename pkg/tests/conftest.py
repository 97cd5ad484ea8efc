"""Suite-wide configuration: the acceptance summary block.

test_acceptance.py registers one line per criterion here; the terminal
summary prints them together so the whole checklist is visible in one place
even when everything passes.
"""

ACCEPTANCE_LINES: list[str] = []


def record_acceptance(line: str) -> None:
    ACCEPTANCE_LINES.append(line)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(line)
