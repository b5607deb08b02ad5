"""Collects acceptance-criterion outcomes and prints one line per criterion."""

import pytest

_criteria: dict[int, dict] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    number, title = marker.args
    entry = _criteria.setdefault(number, {"title": title, "ok": True, "notes": []})
    failed = report.failed or (report.when == "call" and hasattr(report, "wasxfail"))
    if report.when == "call" or failed:
        if failed:
            entry["ok"] = False
            entry["notes"].append(item.name)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for number in sorted(_criteria):
        e = _criteria[number]
        status = "PASS" if e["ok"] else "FAIL"
        line = f"criterion {number:>2} {status}  {e['title']}"
        if e["notes"]:
            line += f"  [failed: {', '.join(e['notes'])}]"
        terminalreporter.write_line(line)
