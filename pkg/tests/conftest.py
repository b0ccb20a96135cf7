import pytest

_RESULTS = []


@pytest.fixture
def criterion():
    """Record an acceptance-criterion outcome for the end-of-run summary."""

    def record(name: str, passed: bool, detail: str = ""):
        _RESULTS.append((name, passed, detail))
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed, detail in _RESULTS:
        line = f"{'PASS' if passed else 'FAIL'}  {name}"
        if detail:
            line += f"  ({detail})"
        terminalreporter.write_line(line)
