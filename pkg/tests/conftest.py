def pytest_terminal_summary(terminalreporter):
    from tests.test_acceptance import LINES

    if LINES:
        terminalreporter.section("acceptance")
        for _, line in sorted(LINES):
            terminalreporter.write_line(line)
