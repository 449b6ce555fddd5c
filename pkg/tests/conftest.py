import pytest

_outcomes = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, label): acceptance criterion checked by the test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or report.when == "teardown":
        return
    key = tuple(marker.args)
    ok = _outcomes.get(key, True) and not report.failed
    if report.when == "call" or not ok:
        _outcomes[key] = ok


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for (number, label), ok in sorted(_outcomes.items()):
        terminalreporter.write_line(f"criterion {number} {label}: {'PASS' if ok else 'FAIL'}")
