"""Collects one PASS/FAIL line per acceptance criterion and prints them after the run."""
import pytest

_RESULTS: dict = {}


class _Recorder:
    def __init__(self, key):
        self.key = key

    def __call__(self, passed: bool, detail: str):
        _RESULTS[self.key] = (bool(passed), detail)
        line = f"[criterion {self.key}] {'PASS' if passed else 'FAIL'}: {detail}"
        print(line)
        assert passed, line


@pytest.fixture
def criterion(request):
    """``criterion(passed, detail)``; the id comes from the test's ``criterion_id`` marker."""
    marker = request.node.get_closest_marker("criterion_id")
    key = marker.args[0] if marker else request.node.name
    yield _Recorder(key)
    if key not in _RESULTS:
        _RESULTS[key] = (False, "raised before reporting")


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion_id(n): acceptance criterion number")


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_RESULTS, key=lambda k: (len(str(k)), str(k))):
        passed, detail = _RESULTS[key]
        terminalreporter.write_line(f"criterion {key}: {'PASS' if passed else 'FAIL'} - {detail}")
