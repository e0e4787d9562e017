import pytest

_criteria: list[tuple[int, str, str, float]] = []


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    if report.when == "call" or (report.when == "setup" and report.failed):
        number, title = mark.args
        status = "PASS" if report.passed else "FAIL"
        _criteria.append((number, title, status, report.duration))
        # Shown live under -s, and again in the terminal summary.
        print(f"\n[criterion {number}] {status} {title} ({report.duration:.2f}s)", flush=True)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, status, duration in sorted(_criteria):
        terminalreporter.write_line(f"{status}  {number:>2}. {title} ({duration:.2f}s)")
