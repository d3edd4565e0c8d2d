"""Carries the release-gate summary past pytest's output capture."""

REPORT = []


def pytest_terminal_summary(terminalreporter):
    if REPORT:
        terminalreporter.section("release gate")
        for line in REPORT:
            terminalreporter.write_line(line)
