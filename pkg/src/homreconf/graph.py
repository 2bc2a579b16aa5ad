"""Finite undirected graphs with loops, and the products built from them.

Vertices are name tokens kept in declaration order; internally every vertex
is addressed by its position in that order and neighbourhoods are stored as
integer bitmasks (bit ``j`` of ``masks[i]`` is set iff ``i ~ j``; a loop on
``i`` sets bit ``i``).  All "lexicographic" choices in this package mean
declaration order, which for products is the order of coordinate pairs.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Iterable, Iterator, Sequence

__all__ = [
    "INFINITE",
    "Graph",
    "GraphParseError",
    "ProductGraph",
    "DiagonalSquare",
    "parse_graph",
    "read_graph",
    "bipartite_classify",
    "bfs_distances",
    "distance_matrix",
    "categorical_product",
    "bipartite_resolution",
    "square_with_diagonal",
    "iter_bits",
]

PAIR_SEP = "|"


class _Infinite:
    """Distance between vertices in different components.

    Deliberately supports no arithmetic: bound formulas must handle it.
    """

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INFINITE"

    def __reduce__(self):
        return (_Infinite, ())


INFINITE = _Infinite()


class GraphParseError(ValueError):
    def __init__(self, line_no: int, message: str) -> None:
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class Graph:
    """Immutable symmetric adjacency structure over named vertices."""

    __slots__ = ("vertices", "index", "masks", "_hash")

    def __init__(self, vertices: Iterable[str], edges: Iterable[tuple[str, str]] = ()) -> None:
        names = tuple(str(v) for v in vertices)
        index = {v: i for i, v in enumerate(names)}
        if len(index) != len(names):
            raise ValueError("vertex names must be unique")
        masks = [0] * len(names)
        for u, v in edges:
            try:
                i, j = index[str(u)], index[str(v)]
            except KeyError as exc:
                raise ValueError(f"edge endpoint {exc.args[0]!r} is not a vertex") from None
            masks[i] |= 1 << j
            masks[j] |= 1 << i
        self._init(names, index, tuple(masks))

    def _init(self, names: tuple[str, ...], index: dict[str, int], masks: tuple[int, ...]) -> None:
        self.vertices = names
        self.index = index
        self.masks = masks
        self._hash = None

    @classmethod
    def from_masks(cls, vertices: Sequence[str], masks: Sequence[int]) -> "Graph":
        """Build directly from neighbourhood masks (assumed symmetric)."""
        g = cls.__new__(cls)
        names = tuple(vertices)
        g._init(names, {v: i for i, v in enumerate(names)}, tuple(masks))
        return g

    @property
    def n(self) -> int:
        return len(self.vertices)

    def __len__(self) -> int:
        return len(self.vertices)

    def __contains__(self, name: object) -> bool:
        return name in self.index

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.vertices == other.vertices and self.masks == other.masks

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.vertices, self.masks))
        return self._hash

    def __repr__(self) -> str:
        return f"{type(self).__name__}(n={self.n}, m={self.edge_count()}, loops={len(self.loops)})"

    def idx(self, name: str) -> int:
        try:
            return self.index[name]
        except KeyError:
            raise KeyError(f"unknown vertex {name!r}") from None

    def adjacent(self, i: int, j: int) -> bool:
        return bool(self.masks[i] >> j & 1)

    def looped(self, i: int) -> bool:
        return bool(self.masks[i] >> i & 1)

    def nbrs(self, i: int) -> list[int]:
        """Neighbours of ``i`` in index order, including ``i`` if looped."""
        return list(iter_bits(self.masks[i]))

    def degree(self, i: int) -> int:
        return self.masks[i].bit_count()

    @property
    def loops(self) -> frozenset[int]:
        return frozenset(i for i in range(self.n) if self.looped(i))

    @property
    def loop_mask(self) -> int:
        return sum(1 << i for i in range(self.n) if self.looped(i))

    def is_reflexive(self) -> bool:
        return all(self.looped(i) for i in range(self.n))

    def is_irreflexive(self) -> bool:
        return not any(self.looped(i) for i in range(self.n))

    def edges(self) -> list[tuple[int, int]]:
        """Each edge once as ``(i, j)`` with ``i <= j``; loops as ``(i, i)``."""
        return [(i, j) for i in range(self.n) for j in iter_bits(self.masks[i] >> i << i)]

    def edge_count(self) -> int:
        return len(self.edges())

    def induced(self, keep: Sequence[int]) -> "Graph":
        keep = list(keep)
        pos = {old: new for new, old in enumerate(keep)}
        masks = []
        for old in keep:
            m = 0
            for j in iter_bits(self.masks[old]):
                if j in pos:
                    m |= 1 << pos[j]
            masks.append(m)
        return Graph.from_masks([self.vertices[i] for i in keep], masks)

    def with_loops(self, loops: Iterable[int]) -> "Graph":
        masks = list(self.masks)
        for i in loops:
            masks[i] |= 1 << i
        return Graph.from_masks(self.vertices, masks)

    def without_loops(self) -> "Graph":
        return Graph.from_masks(self.vertices, [m & ~(1 << i) for i, m in enumerate(self.masks)])

    def components(self) -> list[list[int]]:
        seen = [False] * self.n
        comps = []
        for s in range(self.n):
            if seen[s]:
                continue
            seen[s] = True
            comp, queue = [s], deque([s])
            while queue:
                x = queue.popleft()
                for y in iter_bits(self.masks[x]):
                    if not seen[y]:
                        seen[y] = True
                        comp.append(y)
                        queue.append(y)
            comps.append(sorted(comp))
        return comps

    def is_connected(self) -> bool:
        return self.n > 0 and len(self.components()) == 1

    def to_text(self) -> str:
        """Edge-list text; vertex lines lead whenever the edges alone would
        declare vertices out of order."""
        seen: dict[int, None] = {}
        lines = []
        for i, j in self.edges():
            lines.append(f"{self.vertices[i]} {self.vertices[j]}")
            seen.setdefault(i)
            seen.setdefault(j)
        if list(seen) != list(range(len(seen))):
            return "\n".join(list(self.vertices) + lines) + "\n"
        lines += [self.vertices[i] for i in range(len(seen), self.n)]
        return "\n".join(lines) + "\n"


def parse_graph(text: str) -> Graph:
    """Parse the edge-list format: one token per line declares a vertex,
    two tokens declare an edge (equal tokens give a loop), ``#`` comments."""
    order: dict[str, None] = {}
    edges = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if len(tokens) > 2:
            raise GraphParseError(line_no, f"expected 1 or 2 tokens, got {len(tokens)}")
        for t in tokens:
            order.setdefault(t)
        if len(tokens) == 2:
            edges.append((tokens[0], tokens[1]))
    return Graph(order, edges)


def read_graph(path: str | Path) -> Graph:
    return parse_graph(Path(path).read_text(encoding="utf-8"))


def bipartite_classify(g: Graph) -> tuple[frozenset[int], frozenset[int]] | None:
    """Black/white sides with every edge crossing, or None.

    The black side of each component contains its first vertex.
    """
    colour = [-1] * g.n
    for comp in g.components():
        s = comp[0]
        colour[s] = 0
        queue = deque([s])
        while queue:
            x = queue.popleft()
            for y in iter_bits(g.masks[x]):
                if colour[y] < 0:
                    colour[y] = 1 - colour[x]
                    queue.append(y)
                elif colour[y] == colour[x]:
                    return None
    black = frozenset(i for i in range(g.n) if colour[i] == 0)
    white = frozenset(i for i in range(g.n) if colour[i] == 1)
    return black, white


def bfs_distances(g: Graph, sources: Iterable[int]) -> list:
    """Distance from the nearest source; INFINITE where unreachable."""
    dist: list = [INFINITE] * g.n
    queue = deque()
    for s in sources:
        if dist[s] is INFINITE:
            dist[s] = 0
            queue.append(s)
    while queue:
        x = queue.popleft()
        for y in iter_bits(g.masks[x]):
            if dist[y] is INFINITE:
                dist[y] = dist[x] + 1
                queue.append(y)
    return dist


@lru_cache(maxsize=64)
def _distance_rows(g: Graph) -> tuple[tuple, ...]:
    return tuple(tuple(bfs_distances(g, [s])) for s in range(g.n))


def distance_matrix(g: Graph) -> tuple[tuple, ...]:
    """All-pairs shortest-walk distances (INFINITE across components)."""
    return _distance_rows(g)


class ProductGraph(Graph):
    """Categorical product ``left x right`` over coordinate pairs.

    Pair vertices are named ``"a|b"`` and ordered by ``(index a, index b)``.
    """

    __slots__ = ("left", "right", "pairs", "pair_index")

    def left_projection(self, i: int) -> int:
        return self.pairs[i][0]

    def right_projection(self, i: int) -> int:
        return self.pairs[i][1]

    def swapped(self) -> "ProductGraph":
        return categorical_product(self.right, self.left)


def categorical_product(a: Graph, b: Graph) -> ProductGraph:
    pairs = [(i, j) for i in range(a.n) for j in range(b.n)]
    nb = b.n
    masks = []
    for i, j in pairs:
        m = 0
        for i2 in iter_bits(a.masks[i]):
            base = i2 * nb
            for j2 in iter_bits(b.masks[j]):
                m |= 1 << (base + j2)
        masks.append(m)
    names = [f"{a.vertices[i]}{PAIR_SEP}{b.vertices[j]}" for i, j in pairs]
    if len(set(names)) != len(names):
        # pair names collide only when tokens contain the separator
        names = [f"({a.vertices[i]}{PAIR_SEP}{b.vertices[j]})" for i, j in pairs]
    p = ProductGraph.__new__(ProductGraph)
    p._init(tuple(names), {v: k for k, v in enumerate(names)}, tuple(masks))
    p.left, p.right = a, b
    p.pairs = tuple(pairs)
    p.pair_index = {pair: k for k, pair in enumerate(pairs)}
    return p


K2 = Graph(["0", "1"], [("0", "1")])


def bipartite_resolution(h: Graph) -> ProductGraph:
    """``K2 x H``; vertex ``(s, v)`` is named ``"s|v"`` for side ``s`` in {0, 1}."""
    return categorical_product(K2, h)


@dataclass(frozen=True, eq=False)
class DiagonalSquare:
    """``H x H`` with its diagonal and the component containing the diagonal.

    ``component`` is re-indexed: component vertex ``c`` is square vertex
    ``square_index[c]`` with coordinates ``pairs[c]``.
    """

    h: Graph
    square: ProductGraph
    diagonal: frozenset[int]
    component: Graph
    square_index: tuple[int, ...]
    pairs: tuple[tuple[int, int], ...]
    component_index: dict
    dist_to_diagonal: tuple[int, ...]

    def diag(self, x: int) -> int:
        """Component index of ``(x, x)``."""
        return self.component_index[(x, x)]

    @property
    def diagonal_component_indices(self) -> frozenset[int]:
        return frozenset(self.diag(x) for x in range(self.h.n))

    def contains_pair(self, a: int, b: int) -> bool:
        return (a, b) in self.component_index


@lru_cache(maxsize=32)
def square_with_diagonal(h: Graph) -> DiagonalSquare:
    if not h.is_connected():
        raise ValueError("square_with_diagonal requires a connected graph")
    sq = categorical_product(h, h)
    diagonal = frozenset(sq.pair_index[(x, x)] for x in range(h.n))
    dist = bfs_distances(sq, sorted(diagonal))
    keep = [i for i in range(sq.n) if dist[i] is not INFINITE]
    comp = sq.induced(keep)
    pairs = tuple(sq.pairs[i] for i in keep)
    return DiagonalSquare(
        h=h,
        square=sq,
        diagonal=diagonal,
        component=comp,
        square_index=tuple(keep),
        pairs=pairs,
        component_index={pair: c for c, pair in enumerate(pairs)},
        dist_to_diagonal=tuple(dist[i] for i in keep),
    )
