import numpy as np
import pytest

from densecode.states import PartyLayout, from_pure


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def bell():
    return from_pure([1, 0, 0, 1], PartyLayout.build([2, 2], "SR", ["A", "B"]))


@pytest.fixture
def qubit():
    return PartyLayout.build([2], "S")


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def accept():
    """Record one acceptance line; the result is printed in the terminal summary."""

    def record(number: int, title: str, ok: bool, detail: str) -> bool:
        ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] criterion {number:>2}: {title} -- {detail}")
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda l: int(l.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)
