_CRITERIA = []


import pytest


@pytest.fixture
def criterion():
    """Record one acceptance-criterion outcome for the terminal summary."""

    def record(name: str, passed: bool, detail: str = "") -> bool:
        _CRITERIA.append((name, bool(passed), detail))
        return bool(passed)

    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in _CRITERIA:
        tail = f"  ({detail})" if detail else ""
        terminalreporter.write_line(f"{name}: {'PASS' if ok else 'FAIL'}{tail}")
