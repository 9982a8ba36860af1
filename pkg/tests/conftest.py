"""Shared pytest hooks for the dzl test suite.

The acceptance tests record one PASS/FAIL line per criterion; output
capture would hide the lines for passing tests, so they are replayed in
the terminal summary instead.
"""

ACCEPTANCE_LINES: list = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE_LINES:
        terminalreporter.write_line(line)
