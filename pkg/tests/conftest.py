import pytest

_criteria: dict[int, tuple[str, str]] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None or rep.when != "call" and not rep.failed:
        return
    num, title = marker.args
    prev = _criteria.get(num, (None, title))[0]
    status = "FAIL" if rep.failed or prev == "FAIL" else "PASS"
    _criteria[num] = (status, title)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_criteria):
        status, title = _criteria[num]
        terminalreporter.write_line(f"criterion {num:2d}: {status}  {title}")
    terminalreporter.write_line("criterion 10: N/A   cluster runtime tables need a Spark cluster; nothing depends on them")
