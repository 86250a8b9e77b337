import re
from collections import defaultdict

_outcomes = defaultdict(list)
_TITLES = {
    1: "relation suite on evaluation modules",
    2: "coproduct laws",
    3: "cyclic/cocyclic dichotomy and orientation",
    4: "Drinfeld polynomials",
    5: "R-matrix suite",
    6: "partial R-matrix",
    7: "triangular coproduct property",
    8: "guard rails",
}


def pytest_runtest_logreport(report):
    m = re.search(r"test_acceptance\.py::test_criterion_(\d+)", report.nodeid)
    if not m:
        return
    if report.when == "call" or report.outcome != "passed":
        _outcomes[int(m.group(1))].append((report.nodeid.split("::")[-1], report.passed))


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(_outcomes):
        results = _outcomes[n]
        ok = all(passed for _, passed in results)
        tr.write_line(f"criterion {n} ({_TITLES.get(n, '')}): {'PASS' if ok else 'FAIL'}")
        for name, passed in results:
            if not passed:
                tr.write_line(f"    failed: {name}")
