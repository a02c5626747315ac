import pytest

_ACCEPTANCE_LINES = []


@pytest.fixture
def verdict():
    """Record a one-line pass/fail verdict that is echoed in the terminal summary."""

    def record(label, passed, detail):
        line = f"{label}: {'PASS' if passed else 'FAIL'} ({detail})"
        _ACCEPTANCE_LINES.append(line)
        print(line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
