import pytest

_RESULTS = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or report.when != "call" and not report.failed:
        return
    number, title = marker.args
    measured = dict(item.user_properties).get("measured", "")
    ok = report.passed if report.when == "call" else False
    prev = _RESULTS.get(number)
    _RESULTS[number] = (title, (prev is None or prev[1]) and ok, measured or (prev[2] if prev else ""))


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_RESULTS):
        title, ok, measured = _RESULTS[number]
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:>2}: {title}"
        if measured:
            line += f" -- {measured}"
        terminalreporter.write_line(line)
