CRITERION_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if not CRITERION_LINES:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for line in CRITERION_LINES:
        terminalreporter.write_line(line)
