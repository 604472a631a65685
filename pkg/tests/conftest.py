import pytest


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): exit criterion of the package")
    config._acceptance_lines = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        number, title = marker.args
        detail = dict(item.user_properties).get("detail", "")
        verdict = "PASS" if report.passed else "FAIL"
        item.config._acceptance_lines.append((int(number), f"[{verdict}] {number:>2}. {title}  {detail}".rstrip()))


def pytest_terminal_summary(terminalreporter, config):
    lines = sorted(config._acceptance_lines)
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in lines:
        terminalreporter.write_line(line)
