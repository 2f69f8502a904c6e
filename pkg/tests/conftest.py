from hypothesis import settings

# exact big-integer work has heavy-tailed runtimes; count examples, not milliseconds
settings.register_profile("algcensus", deadline=None, max_examples=60)
settings.load_profile("algcensus")

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
