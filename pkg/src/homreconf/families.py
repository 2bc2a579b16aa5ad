"""Standard graph families and small-graph corpora."""

from __future__ import annotations

import itertools
import random
from typing import Iterator, Sequence

from .graph import Graph, categorical_product

__all__ = [
    "looped_vertex",
    "complete",
    "path",
    "cycle",
    "star",
    "spider",
    "hypercube",
    "king",
    "reflexive",
    "grid_example",
    "diamond",
    "canonical_form",
    "small_connected_graphs",
    "random_connected_graph",
]


def looped_vertex(name: str = "v") -> Graph:
    return Graph([name], [(name, name)])


def reflexive(g: Graph) -> Graph:
    return g.with_loops(range(g.n))


def complete(n: int) -> Graph:
    names = [str(i) for i in range(n)]
    return Graph(names, itertools.combinations(names, 2))


def path(length: int, looped: bool = False, prefix: str = "") -> Graph:
    """Path on ``length + 1`` vertices ``0..length``."""
    names = [f"{prefix}{i}" for i in range(length + 1)]
    edges = list(zip(names, names[1:]))
    if looped:
        edges += [(v, v) for v in names]
    return Graph(names, edges)


def cycle(n: int, looped: bool = False) -> Graph:
    names = [str(i) for i in range(n)]
    edges = [(names[i], names[(i + 1) % n]) for i in range(n)]
    if looped:
        edges += [(v, v) for v in names]
    return Graph(names, edges)


def star(leaves: int) -> Graph:
    names = ["c"] + [f"l{i}" for i in range(1, leaves + 1)]
    return Graph(names, [("c", x) for x in names[1:]])


def spider(lengths: Sequence[int]) -> Graph:
    """Tree with a centre ``c`` and one branch per entry of ``lengths``.

    Branch ``b`` has vertices ``b.1 .. b.len`` with ``b.len`` its leaf.
    """
    names = ["c"]
    edges = []
    for b, length in enumerate(lengths):
        prev = "c"
        for k in range(1, length + 1):
            name = f"{b}.{k}"
            names.append(name)
            edges.append((prev, name))
            prev = name
    return Graph(names, edges)


def hypercube(d: int) -> Graph:
    names = ["".join(bits) for bits in itertools.product("01", repeat=d)]
    edges = []
    for v in names:
        for k in range(d):
            w = v[:k] + ("1" if v[k] == "0" else "0") + v[k + 1 :]
            if v < w:
                edges.append((v, w))
    return Graph(names, edges)


def king(length: int) -> Graph:
    """Product of two reflexive paths of the given length, vertices ``"i,j"``."""
    p = path(length, looped=True)
    prod = categorical_product(p, p)
    names = [f"{i},{j}" for i, j in prod.pairs]
    return Graph.from_masks(names, prod.masks)


def grid_example(length: int) -> tuple[Graph, Graph, dict[str, str], list[str], list[str]]:
    """The staircase instance on the king graph of the given side length.

    Returns ``(G, H, pins, phi, psi)``: ``G`` is the irreflexive path with
    ``length + 2`` vertices, ``pins`` fixes its ends at the two corners, and
    ``phi``/``psi`` are the staircases just below / above the main diagonal,
    as lists of H-vertex names along G.
    """
    n = length
    h = king(n)
    g = path(n + 1, prefix="g")
    phi = ["0,0"] + [f"{i},{i - 1}" for i in range(1, n + 1)] + [f"{n},{n}"]
    psi = ["0,0"] + [f"{i - 1},{i}" for i in range(1, n + 1)] + [f"{n},{n}"]
    ends = g.vertices[0], g.vertices[-1]
    pins = {ends[0]: "0,0", ends[1]: f"{n},{n}"}
    return g, h, pins, phi, psi


def diamond() -> Graph:
    """4-cycle a-b-c-d-a with the chord b-d."""
    return Graph("abcd", [("a", "b"), ("b", "c"), ("c", "d"), ("d", "a"), ("b", "d")])


def canonical_form(g: Graph) -> tuple:
    """Relabelling-invariant key, by brute force over vertex permutations."""
    best = None
    n = g.n
    for perm in itertools.permutations(range(n)):
        key = tuple(
            tuple(sorted(perm[j] for j in range(n) if g.adjacent(old, j)))
            for old in _inverse(perm)
        )
        if best is None or key < best:
            best = key
    return (n, best)


def _inverse(perm: Sequence[int]) -> list[int]:
    inv = [0] * len(perm)
    for i, p in enumerate(perm):
        inv[p] = i
    return inv


def small_connected_graphs(max_n: int, loops: str = "none") -> Iterator[Graph]:
    """Connected graphs on 1..max_n vertices up to isomorphism.

    ``loops``: ``"none"`` (irreflexive), ``"all"`` (reflexive) or ``"every"``
    (each loop pattern, deduplicated together with the edge set).
    """
    seen = set()
    for n in range(1, max_n + 1):
        names = [str(i) for i in range(n)]
        pairs = list(itertools.combinations(range(n), 2))
        loop_choices = {
            "none": [()],
            "all": [tuple(range(n))],
            "every": [
                tuple(i for i in range(n) if bits >> i & 1) for bits in range(1 << n)
            ],
        }[loops]
        for edge_bits in range(1 << len(pairs)):
            edges = [
                (names[i], names[j]) for k, (i, j) in enumerate(pairs) if edge_bits >> k & 1
            ]
            base = Graph(names, edges)
            if not base.is_connected():
                continue
            for lp in loop_choices:
                g = base.with_loops(lp)
                key = canonical_form(g)
                if key in seen:
                    continue
                seen.add(key)
                yield g


def random_connected_graph(
    n: int, rng: random.Random, edge_prob: float = 0.4, loop_prob: float = 0.3
) -> Graph:
    """Random spanning tree plus random extra edges and loops."""
    names = [str(i) for i in range(n)]
    order = list(range(n))
    rng.shuffle(order)
    edges = set()
    for k in range(1, n):
        a, b = order[k], order[rng.randrange(k)]
        edges.add((min(a, b), max(a, b)))
    for i, j in itertools.combinations(range(n), 2):
        if rng.random() < edge_prob:
            edges.add((i, j))
    for i in range(n):
        if rng.random() < loop_prob:
            edges.add((i, i))
    return Graph(names, [(names[i], names[j]) for i, j in sorted(edges)])
