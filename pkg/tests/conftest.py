import pytest

_LINES: list[str] = []


@pytest.fixture
def report_line():
    """Record one PASS/FAIL line for the acceptance summary."""
    def record(criterion: int, ok: bool, detail: str):
        line = f"{'PASS' if ok else 'FAIL'} criterion {criterion}: {detail}"
        _LINES.append(line)
        print(line)
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_LINES, key=lambda s: int(s.split()[2].rstrip(":").split(".")[0])):
            terminalreporter.write_line(line)
