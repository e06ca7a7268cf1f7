import pytest

from kruskallab import _backend

_acceptance: dict[int, dict] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None or (report.when != "call" and report.passed):
        return
    number, title = marker.args
    entry = _acceptance.setdefault(number, {"title": title, "ok": True, "tests": 0})
    if report.when == "call":
        entry["tests"] += 1
    if report.failed:
        entry["ok"] = False


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_acceptance):
        entry = _acceptance[number]
        verdict = "PASS" if entry["ok"] and entry["tests"] else "FAIL"
        terminalreporter.write_line(f"ACCEPTANCE criterion {number}: {verdict}  {entry['title']}")


@pytest.fixture(params=_backend.available())
def backend(request):
    previous = _backend.use(request.param)
    yield request.param
    _backend.use(previous)
