"""Test-wide fixtures and the acceptance report hook."""

import pytest

_ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def acceptance():
    """Record one PASS/FAIL line per acceptance criterion, then assert it."""

    def record(number, name, ok, detail=""):
        line = "ACCEPTANCE %d (%s): %s" % (number, name,
                                           "PASS" if ok else "FAIL")
        if detail:
            line += "  [%s]" % detail
        _ACCEPTANCE_LINES.append(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in _ACCEPTANCE_LINES:
        terminalreporter.write_line(line)
