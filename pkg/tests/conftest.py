import pytest

_outcomes: dict[int, tuple[str, float]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    n = marker.args[0]
    if report.when == "call" or report.failed:
        prev = _outcomes.get(n, ("PASS", 0.0))
        status = "FAIL" if report.failed or prev[0] == "FAIL" else "PASS"
        _outcomes[n] = (status, prev[1] + report.duration)


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_outcomes):
        status, seconds = _outcomes[n]
        terminalreporter.write_line(f"criterion {n}: {status} ({seconds:.2f}s)")
