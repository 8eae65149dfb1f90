import pytest

# Outcomes of the acceptance criteria, keyed by criterion number.
_CRITERIA: dict[int, tuple[str, str, float | None]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): one numbered acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    number, title = mark.args
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        seconds = dict(item.user_properties).get("seconds")
        _CRITERIA[number] = (title, "PASS" if rep.passed else "FAIL", seconds)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        title, status, seconds = _CRITERIA[number]
        timing = "" if seconds is None else f" ({seconds:.2f} s)"
        terminalreporter.write_line(f"{status} criterion {number}: {title}{timing}")
