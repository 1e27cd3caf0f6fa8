import pytest

_LINES: list[str] = []


@pytest.fixture
def acceptance_line():
    """Record the one-line verdict for an acceptance criterion."""
    return _LINES.append


def pytest_terminal_summary(terminalreporter):
    if not _LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(_LINES):
        terminalreporter.write_line(line)
