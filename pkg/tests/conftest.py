import sys

import pytest

if hasattr(sys, "set_int_max_str_digits"):
    sys.set_int_max_str_digits(0)

# criterion number -> (title, tolerance, [outcome, ...], [detail, ...])
_ACCEPTANCE: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(num, title, tolerance): acceptance criterion")


class _Recorder:
    def __init__(self, num):
        self.num = num

    def __call__(self, detail: str):
        _ACCEPTANCE[self.num][3].append(detail)
        print(f"[criterion {self.num}] {detail}")


@pytest.fixture
def acceptance(request):
    """Attach measured values to the acceptance line of the current criterion."""
    m = request.node.get_closest_marker("criterion")
    if m is None:
        raise RuntimeError("the acceptance fixture needs a criterion marker")
    return _Recorder(m.args[0])


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("criterion")
        if m is not None:
            num, title, tol = m.args
            _ACCEPTANCE.setdefault(num, (title, tol, [], []))


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    m = item.get_closest_marker("criterion")
    if m is None:
        return
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        _ACCEPTANCE[m.args[0]][2].append(rep.outcome)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for num in sorted(_ACCEPTANCE):
        title, tol, outcomes, details = _ACCEPTANCE[num]
        if not outcomes:
            status = "NOT RUN"
        elif all(o == "passed" for o in outcomes):
            status = "PASS"
        elif any(o == "failed" for o in outcomes):
            status = "FAIL"
        else:
            status = "SKIP"
        tr.write_line(f"criterion {num}: {status:7s} {title} "
                      f"[tolerance: {tol}; {outcomes.count('passed')}/{len(outcomes)} checks]")
        for d in details:
            tr.write_line(f"    {d}")
