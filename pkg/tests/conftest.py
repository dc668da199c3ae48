import time

import pytest

_RESULTS = pytest.StashKey[dict]()
_START = pytest.StashKey[float]()
SUITE_BUDGET_S = 300.0


def pytest_configure(config):
    config.stash[_RESULTS] = {}
    config.stash[_START] = time.perf_counter()


@pytest.fixture
def note(request):
    """Attach a one-line detail to the current acceptance criterion."""
    marker = request.node.get_closest_marker("criterion")
    entry = request.config.stash[_RESULTS].setdefault(marker.args[0], {"title": marker.args[1]})

    def _note(detail: str):
        entry["detail"] = detail

    return _note


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    entry = item.config.stash[_RESULTS].setdefault(marker.args[0], {"title": marker.args[1]})
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        entry["passed"] = rep.passed
        entry["seconds"] = rep.duration
        if rep.failed and "detail" not in entry:
            entry["detail"] = rep.longreprtext.strip().splitlines()[-1][:160]


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results = config.stash[_RESULTS]
    if not results:
        return
    elapsed = time.perf_counter() - config.stash[_START]
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        entry = results[number]
        passed = entry.get("passed", False)
        detail = entry.get("detail", "")
        if number == 11:
            passed = passed and elapsed <= SUITE_BUDGET_S
            detail = f"{detail}; session runtime {elapsed:.1f} s (budget {SUITE_BUDGET_S:.0f} s)"
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"[{status}] criterion {number:2d}: {entry['title']} ({detail})")
