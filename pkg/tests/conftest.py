import pytest

_ACCEPTANCE: list[str] = []


@pytest.fixture(scope="session")
def acceptance_line():
    """Record one summary line per acceptance criterion."""

    def record(number: int, title: str, passed: bool, detail: str, seconds: float) -> str:
        line = f"[{'PASS' if passed else 'FAIL'}] {number:2d}. {title}: {detail} ({seconds:.1f} s)"
        _ACCEPTANCE.append(line)
        print(line)
        return line

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in sorted(_ACCEPTANCE, key=lambda s: int(s.split(".")[0].split()[-1])):
            terminalreporter.write_line(line)
