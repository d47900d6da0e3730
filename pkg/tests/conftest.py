"""Shared fixtures and the acceptance summary printed after the run."""
from fractions import Fraction

import pytest

from nullcone.rootsystem import root_datum
from nullcone.weightsys import weight_system

# criterion number -> (description, outcome)
_ACCEPTANCE = {}
# criterion number -> lines the tests printed, shown under the summary
_NOTES = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(n, text): acceptance criterion n")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("acceptance")
    if mark is None:
        return
    n, text = mark.args
    if rep.when == "call" and rep.capstdout:
        _NOTES.setdefault(n, []).extend(rep.capstdout.splitlines())
    prev = _ACCEPTANCE.get(n, (text, "PASS"))[1]
    if rep.when == "call" or rep.failed:
        status = "PASS" if rep.passed else ("SKIP" if rep.skipped else "FAIL")
        if prev == "FAIL" or status == "FAIL":
            status = "FAIL"
        elif prev == "SKIP" and status == "PASS":
            status = "PASS"
        _ACCEPTANCE[n] = (text, status)
    elif rep.skipped:
        _ACCEPTANCE.setdefault(n, (text, "SKIP"))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_ACCEPTANCE, key=str):
        text, status = _ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {status}  {text}")
        for line in _NOTES.get(n, ()):
            terminalreporter.write_line(f"    {line}")


def ws_of(series, rank, coeffs, dim_cap=300):
    return weight_system(root_datum(series, rank), coeffs, dim_cap=dim_cap)


def F(*xs):
    return tuple(Fraction(x) for x in xs)
