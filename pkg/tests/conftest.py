"""Shared pytest hooks.

The acceptance gate records one verdict line per criterion; printing them in
the terminal summary keeps the lines visible under the default capture mode
(fd-level capture swallows even direct writes to the original stdout).
"""

import sys


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    verdicts = getattr(module, "VERDICTS", None) if module else None
    if verdicts:
        terminalreporter.section("acceptance criteria")
        for line in verdicts:
            terminalreporter.write_line(line)
