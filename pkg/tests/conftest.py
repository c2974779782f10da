import itertools

import pytest

from iqaoa_jssp import load_fixture
from iqaoa_jssp._backend import available_backends


@pytest.fixture(scope="session")
def inst_a():
    return load_fixture("jssp-3x3-a")


@pytest.fixture(scope="session")
def inst_b():
    return load_fixture("jssp-3x3-b")


@pytest.fixture(scope="session")
def inst_5x2():
    return load_fixture("jssp-5x2")


@pytest.fixture(params=available_backends())
def backend(request):
    return request.param


def brute_vectors(inst):
    """All distinct Bierwirth vectors in lexicographic order, via itertools."""
    base = [j for j, k in enumerate(inst.multiplicities()) for _ in range(k)]
    return sorted(set(itertools.permutations(base)))


# reference makespan histogram of jssp-3x3-b
REF_3X3_COUNTS = {181: 928, 194: 81, 207: 116, 212: 225, 217: 75, 222: 84, 223: 30, 228: 15,
                  232: 12, 233: 56, 243: 33, 248: 11, 249: 9, 259: 5}


_acceptance = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("acceptance")
    if mark is None or (report.when != "call" and report.passed):
        return
    number, title = mark.args
    details = "; ".join(f"{k}={v}" for k, v in item.user_properties)
    status = "PASS" if report.passed else "FAIL"
    prev = _acceptance.get(number)
    if prev is not None:
        # parametrized criteria pass only if every case passes
        status = "FAIL" if "FAIL" in (prev[1], status) else "PASS"
        details = "; ".join(d for d in (prev[2], details) if d)
    _acceptance[number] = (title, status, details)


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_acceptance):
        title, status, details = _acceptance[number]
        line = f"criterion {number:>2}: {status}  {title}"
        terminalreporter.write_line(line + (f"  [{details}]" if details else ""))
