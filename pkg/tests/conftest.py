"""Shared pytest hooks: surface the acceptance-criterion result lines.

Default capture swallows prints at the file-descriptor level, so the
acceptance tests register their one-line verdicts here and a terminal
summary section replays them after the run.
"""

acceptance_lines = []


def pytest_terminal_summary(terminalreporter):
    if acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in acceptance_lines:
            terminalreporter.write_line(line)
