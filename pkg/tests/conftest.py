import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))


@pytest.fixture
def data_dir():
    return Path(__file__).parent / "data"


# acceptance criteria: one PASS/FAIL line per criterion in the terminal summary
_criteria: dict[int, dict] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(n, title): acceptance criterion n")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("acceptance")
    if mark is None or (rep.when != "call" and not rep.failed):
        return
    n, title = mark.args
    entry = _criteria.setdefault(n, {"title": title, "ok": True, "seconds": 0.0})
    entry["ok"] = entry["ok"] and not rep.failed
    entry["seconds"] += rep.duration


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        e = _criteria[n]
        status = "PASS" if e["ok"] else "FAIL"
        terminalreporter.write_line(f"criterion {n}: {status}  {e['title']} ({e['seconds']:.2f}s)")
