import re
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

_CRITERION = re.compile(r"test_criterion_(\d+)_")
_outcomes: dict = {}


def pytest_runtest_logreport(report):
    m = _CRITERION.search(report.nodeid)
    if not m:
        return
    n = int(m.group(1))
    failed = report.failed or (report.when == "call" and report.skipped)
    if report.when == "call" or failed:
        _outcomes.setdefault(n, []).append(not failed)


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_outcomes):
        status = "PASS" if all(_outcomes[n]) else "FAIL"
        terminalreporter.write_line(f"criterion {n}: {status}")
