import pytest

_CRITERIA = []


@pytest.fixture
def criterion():
    """Record one acceptance line; returns whether it passed."""

    def record(number, title, worst, tol, passed):
        line = f"[{'PASS' if passed else 'FAIL'}] criterion {number:>2}: {title} (worst={worst:.3e}, tol={tol:.1e})"
        _CRITERIA.append(line)
        print(line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_CRITERIA, key=lambda s: int(s.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)
