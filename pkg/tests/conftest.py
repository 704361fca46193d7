from __future__ import annotations

import re

_ACCEPTANCE: dict[int, str] = {}


def pytest_runtest_logreport(report):
    match = re.search(r"test_acceptance\.py::test_criterion_(\d+)_", report.nodeid)
    if not match:
        return
    n = int(match.group(1))
    if report.when == "call" or report.outcome != "passed":
        if _ACCEPTANCE.get(n) != "FAIL":
            _ACCEPTANCE[n] = "PASS" if report.outcome == "passed" else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    from test_acceptance import CRITERIA

    terminalreporter.section("acceptance criteria")
    for n in sorted(_ACCEPTANCE):
        terminalreporter.write_line(f"criterion {n}: {_ACCEPTANCE[n]}  {CRITERIA.get(n, '')}")
