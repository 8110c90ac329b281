import pytest

_ACCEPTANCE = []


@pytest.fixture
def criterion():
    """Record ``(number, title, passed, detail)`` for the acceptance summary."""
    def record(number, title, passed, detail=""):
        _ACCEPTANCE.append((number, title, bool(passed), detail))
        return passed
    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for number, title, passed, detail in sorted(_ACCEPTANCE, key=lambda r: r[0]):
        tr.write_line(f"{'PASS' if passed else 'FAIL'}  {number:>2}. {title}: {detail}")
