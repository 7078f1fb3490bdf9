import pytest

from conceptrec import FormalContext

# toy purchase context: firms f1..f5 x five "long distance calling" phrases
TOY_PHRASES = [
    "call distance long",
    "calling distance long",
    "calling distance long plan",
    "carrier distance long",
    "cheap distance long",
]
TOY_FIRMS = ["f1", "f2", "f3", "f4", "f5"]
TOY_ROWS = [
    [0, 2, 4],
    [1, 2, 3],
    [3, 4],
    [1, 2, 4],
    [0, 1, 3, 4],
]
P1, P2, P3, P4, P5 = range(5)
F1, F2, F3, F4, F5 = range(5)


def toy_context() -> FormalContext:
    return FormalContext.from_rows(TOY_FIRMS, TOY_PHRASES, TOY_ROWS)


@pytest.fixture
def toy():
    return toy_context()


# -- acceptance summary -------------------------------------------------------

ACCEPTANCE_LINES: list[str] = []


def record_acceptance(name: str, ok: bool, detail: str = "") -> None:
    """Print a PASS/FAIL line now and again in the terminal summary, then assert."""
    line = f"[{'PASS' if ok else 'FAIL'}] {name}" + (f" -- {detail}" if detail else "")
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
