from __future__ import annotations

from pathlib import Path

import pytest
from hypothesis import strategies as st

from medex.oracle import point_names
from medex.symmap import build_map

DATA = Path(__file__).parent / "data"

DELTA4_ENTRIES = [
    ("a", "b", "blue"), ("a", "c", "blue"), ("b", "d", "blue"),
    ("b", "c", "red"), ("c", "d", "purple"), ("a", "d", "green"),
]

DELTA5_ENTRIES = [
    ("a", "b", "blue"),
    ("b", "c", "red"), ("b", "d", "red"), ("b", "e", "red"),
    ("a", "c", "purple"), ("a", "d", "purple"), ("a", "e", "purple"), ("c", "e", "purple"),
    ("c", "d", "green"), ("d", "e", "green"),
]


@pytest.fixture
def delta4():
    return build_map("abcd", DELTA4_ENTRIES)


@pytest.fixture
def delta5():
    return build_map("abcde", DELTA5_ENTRIES)


@pytest.fixture
def data_dir():
    return DATA


def constant_map(n: int, label: str = "x"):
    names = point_names(n)
    return build_map(names, [(a, b, label) for i, a in enumerate(names) for b in names[i + 1:]])


@st.composite
def sym_maps(draw, min_n=1, max_n=7, max_k=4):
    """Random maps with points x0.. and labels l0.."""
    n = draw(st.integers(min_n, max_n))
    k = draw(st.integers(1, max_k))
    names = point_names(n)
    entries = []
    for i in range(n):
        for j in range(i + 1, n):
            entries.append((names[i], names[j], f"l{draw(st.integers(0, k - 1))}"))
    return build_map(names, entries)


_ACCEPTANCE: dict[str, str] = {}


@pytest.fixture(scope="session")
def acceptance_log():
    return _ACCEPTANCE


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_ACCEPTANCE, key=lambda s: int(s.split()[0])):
        terminalreporter.write_line(_ACCEPTANCE[key])
