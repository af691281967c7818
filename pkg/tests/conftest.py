import time

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "repo", deadline=None, derandomize=True, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repo")

_criteria: dict = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or report.when != "call":
        return
    number, title = marker.args
    _criteria[number] = (title, report.outcome, report.duration,
                         getattr(item, "criterion_note", ""))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        title, outcome, duration, note = _criteria[number]
        verdict = "PASS" if outcome == "passed" else "FAIL"
        line = f"criterion {number:>2}: {verdict}  {title}  ({duration:.2f} s)"
        if note:
            line += f"  [{note}]"
        terminalreporter.write_line(line)


@pytest.fixture
def note(request):
    """Attach a short summary (counts, timings) to the criterion line."""
    def record(text: str):
        request.node.criterion_note = text
    return record


@pytest.fixture
def stopwatch():
    start = time.perf_counter()
    return lambda: time.perf_counter() - start
