import pytest

_ACCEPTANCE_LINES: dict = {}


@pytest.fixture
def acceptance(request):
    """Record one pass/fail line for an acceptance criterion."""
    number = request.node.get_closest_marker("criterion").args[0]

    def report(ok: bool, detail: str) -> None:
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'} - {detail}"
        _ACCEPTANCE_LINES[number] = line
        print(line)
        assert ok, line

    return report


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("criterion")
    if marker and call.when == "call" and call.excinfo is not None:
        number = marker.args[0]
        if number not in _ACCEPTANCE_LINES:
            _ACCEPTANCE_LINES[number] = f"criterion {number}: FAIL - {call.excinfo.exconly()[:200]}"


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE_LINES):
        terminalreporter.write_line(_ACCEPTANCE_LINES[number])
