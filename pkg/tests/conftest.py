"""Shared pytest wiring: surface the acceptance gate's per-criterion
verdict lines in the terminal summary (stdout capture would otherwise
swallow them for passing tests)."""

CRITERION_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if not CRITERION_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in CRITERION_LINES:
        terminalreporter.write_line(line)
