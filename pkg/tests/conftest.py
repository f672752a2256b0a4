import time

import pytest

from possibilistic.io import load_fixture

_CRITERIA: dict[int, dict] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title, limit): acceptance criterion with a time limit in seconds")


@pytest.fixture(scope="session")
def fx():
    """Fixture spaces by name, each as (space, star)."""
    return {name: load_fixture(name) for name in ("f2", "f3", "s4", "c3", "chain2")}


@pytest.hookimpl(wrapper=True)
def pytest_runtest_call(item):
    start = time.perf_counter()
    try:
        return (yield)
    finally:
        item.user_properties.append(("elapsed", time.perf_counter() - start))


@pytest.hookimpl(wrapper=True)
def pytest_runtest_makereport(item, call):
    report = yield
    mark = item.get_closest_marker("criterion")
    if mark is not None and call.when == "call":
        number, title, limit = mark.args
        elapsed = dict(item.user_properties).get("elapsed", call.duration)
        _CRITERIA[number] = {"title": title, "limit": limit, "elapsed": elapsed, "passed": report.passed}
    return report


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        c = _CRITERIA[number]
        verdict = "PASS" if c["passed"] else "FAIL"
        terminalreporter.write_line(
            f"criterion {number:>2} {verdict}  {c['elapsed']:7.2f}s (limit {c['limit']}s)  {c['title']}"
        )
