from __future__ import annotations

import random

import pytest

from hamcycle.graph import Graph, complete_graph, cycle_graph, path_graph, random_graph


def bowtie() -> Graph:
    """Two triangles sharing vertex 2."""
    return Graph(5, [(0, 1), (0, 2), (1, 2), (2, 3), (2, 4), (3, 4)])


def square_with_diagonal() -> Graph:
    return Graph(4, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)])


def two_triangles() -> Graph:
    return Graph(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])


@pytest.fixture
def k4():
    return complete_graph(4)


@pytest.fixture
def c5():
    return cycle_graph(5)


@pytest.fixture
def p4():
    return path_graph(4)


def random_corpus(n: int, vmin: int, vmax: int, seed: int):
    """``n`` uniform G(v, e) graphs with v in [vmin, vmax] and e uniform over its full range."""
    rng = random.Random(seed)
    for _ in range(n):
        v = rng.randint(vmin, vmax)
        e = rng.randint(0, v * (v - 1) // 2)
        yield random_graph(v, e, rng.randrange(2**63))


# one line per acceptance criterion, printed after the run
ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[n])
