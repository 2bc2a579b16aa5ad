from __future__ import annotations

import random
import warnings
from functools import lru_cache
from pathlib import Path

from hypothesis import strategies as st

from homreconf.families import random_connected_graph, small_connected_graphs
from homreconf.graph import Graph

ROOT = Path(__file__).resolve().parents[1]
CORPUS = ROOT / "corpus"


def pytest_configure(config):
    warnings.filterwarnings("ignore", message="host has loops")


@lru_cache(maxsize=None)
def small_graphs(max_n: int = 4, loops: str = "every") -> tuple[Graph, ...]:
    return tuple(small_connected_graphs(max_n, loops=loops))


@lru_cache(maxsize=None)
def random_graphs(count: int, lo: int, hi: int, seed: int) -> tuple[Graph, ...]:
    rng = random.Random(seed)
    return tuple(random_connected_graph(rng.randint(lo, hi), rng) for _ in range(count))


@st.composite
def graphs(draw, min_n: int = 1, max_n: int = 5, loops: bool = True, connected: bool = False):
    """Random graphs on vertices "0".."n-1"."""
    n = draw(st.integers(min_n, max_n))
    names = [str(i) for i in range(n)]
    edges = []
    if connected:
        for k in range(1, n):
            edges.append((names[k], names[draw(st.integers(0, k - 1))]))
    for i in range(n):
        for j in range(i + 1, n):
            if draw(st.booleans()):
                edges.append((names[i], names[j]))
        if loops and draw(st.booleans()):
            edges.append((names[i], names[i]))
    return Graph(names, edges)
