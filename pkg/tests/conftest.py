import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from socbound import ModelParams  # noqa: E402

# criterion number -> [title, all tests passed so far, tests seen]
_ACCEPTANCE = {}


@pytest.fixture
def canonical():
    """Figure parameters: gamma = -1, eta = 0.6, with Omega chosen per test."""
    return lambda omega: ModelParams(0.6, omega, -1.0)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None or (report.when != "call" and report.passed):
        return
    number, title = marker.args
    entry = _ACCEPTANCE.setdefault(number, [title, True, 0])
    ok = report.passed and not hasattr(report, "wasxfail")
    entry[1] = entry[1] and ok
    entry[2] += report.when == "call"


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        title, ok, _ = _ACCEPTANCE[number]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} criterion {number:2d}: {title}")
