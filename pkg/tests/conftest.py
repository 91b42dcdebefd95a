import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

# Criterion outcomes collected by test_acceptance and echoed after the run.
acceptance_lines: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in acceptance_lines:
            terminalreporter.write_line(line)
