from __future__ import annotations

import random
from fractions import Fraction

import pytest

from hamdual.graph import Graph, all_graphs, cycle_graph, path_graph

_ACCEPTANCE: dict[str, tuple[bool, str]] = {}


def record_criterion(key: str, passed: bool, detail: str = "") -> None:
    _ACCEPTANCE[key] = (passed, detail)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_ACCEPTANCE, key=lambda k: int(k.split()[0])):
        passed, detail = _ACCEPTANCE[key]
        terminalreporter.write_line(f"[{'PASS' if passed else 'FAIL'}] criterion {key}: {detail}")


def random_dyadic(rng: random.Random, n: int, bits: int = 8, scale: int = 6) -> list[Fraction]:
    den = 1 << bits
    return [Fraction(rng.randint(-scale * den, scale * den), den) for _ in range(n)]


@pytest.fixture
def rng():
    return random.Random(12345)


@pytest.fixture(scope="session")
def small_connected():
    return {n: all_graphs(n) for n in (3, 4, 5, 6)}


@pytest.fixture
def k3() -> Graph:
    return Graph.from_edges(3, [(0, 1), (1, 2), (0, 2)])


@pytest.fixture
def p3() -> Graph:
    return path_graph(3)


@pytest.fixture
def c4() -> Graph:
    return cycle_graph(4)
