"""Brute-force ground truth for Hom-graphs.

A homomorphism ``G -> H`` is a tuple of H-vertex indices in G's vertex
order.  Two homomorphisms are WALK-adjacent when ``u ~ v`` in G implies
``phi(u) ~ psi(v)`` in H (so every homomorphism is WALK-adjacent to
itself), and RECONFIG-adjacent when they are WALK-adjacent and differ on
exactly one vertex.
"""

from __future__ import annotations

import warnings
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, Mapping, Sequence

from ._kernels import make_csp
from .errors import CapExceeded, InvalidHomomorphism
from .graph import INFINITE, Graph, bipartite_classify, iter_bits

__all__ = [
    "Hom",
    "EdgeMode",
    "WALK",
    "RECONFIG",
    "HomGraph",
    "pins_from_names",
    "hom_from_names",
    "hom_to_names",
    "is_homomorphism",
    "check_extension",
    "black_domains",
    "enumerate_extensions",
    "hom_adjacent",
    "walk_neighbours",
    "reconfig_neighbours",
    "oracle_bfs",
    "oracle_distance",
    "oracle_path",
    "hom_graph",
]

Hom = tuple[int, ...]


class EdgeMode(str, Enum):
    WALK = "walk"
    RECONFIG = "reconfig"


WALK = EdgeMode.WALK
RECONFIG = EdgeMode.RECONFIG


def pins_from_names(g: Graph, h: Graph, mapping: Mapping[str, str]) -> dict[int, int]:
    return {g.idx(u): h.idx(x) for u, x in mapping.items()}


def hom_from_names(g: Graph, h: Graph, mapping: Mapping[str, str] | Sequence[str]) -> Hom:
    if isinstance(mapping, Mapping):
        missing = [v for v in g.vertices if v not in mapping]
        if missing:
            raise InvalidHomomorphism(f"map is not total: missing {missing}")
        return tuple(h.idx(mapping[v]) for v in g.vertices)
    if len(mapping) != g.n:
        raise InvalidHomomorphism("map length differs from the number of G-vertices")
    return tuple(h.idx(x) for x in mapping)


def hom_to_names(g: Graph, h: Graph, m: Hom) -> dict[str, str]:
    return {g.vertices[i]: h.vertices[x] for i, x in enumerate(m)}


def is_homomorphism(g: Graph, h: Graph, m: Sequence[int]) -> bool:
    if len(m) != g.n:
        return False
    for u in range(g.n):
        need = 0
        for v in iter_bits(g.masks[u]):
            need |= 1 << m[v]
        if need & ~h.masks[m[u]]:
            return False
    return True


def check_extension(g: Graph, h: Graph, m: Sequence[int], p: Mapping[int, int] | None = None) -> None:
    if not is_homomorphism(g, h, m):
        raise InvalidHomomorphism("map does not preserve edges")
    for v, x in (p or {}).items():
        if m[v] != x:
            raise InvalidHomomorphism(
                f"map sends {g.vertices[v]} to {h.vertices[m[v]]}, pinned to {h.vertices[x]}"
            )


def black_domains(g: Graph, h: Graph, p: Mapping[int, int] | None) -> list[int] | None:
    """Per-vertex masks for Hom_B, or None when the restriction does not apply.

    Applies when H is bipartite, G is bipartite and ``p`` sends black
    vertices to black vertices.  Otherwise a warning is issued.
    """
    hb = bipartite_classify(h)
    gb = bipartite_classify(g)
    if hb is None or gb is None:
        warnings.warn("black restriction ignored: needs bipartite G and H", stacklevel=3)
        return None
    h_black = sum(1 << x for x in hb[0])
    h_white = sum(1 << x for x in hb[1])
    for v, x in (p or {}).items():
        if (v in gb[0]) != (x in hb[0]):
            warnings.warn("black restriction ignored: pins are not black-preserving", stacklevel=3)
            return None
    return [h_black if v in gb[0] else h_white for v in range(g.n)]


def _hom_csp(g: Graph, h: Graph, backend: str | None = None):
    var_nbrs = [[u for u in iter_bits(g.masks[v]) if u != v] for v in range(g.n)]
    return make_csp(var_nbrs, [g.looped(v) for v in range(g.n)], h.masks, h.loop_mask, backend)


def _base_domains(csp, g: Graph, p: Mapping[int, int] | None, restrict: list[int] | None) -> list[int]:
    doms = csp.initial_domains()
    if restrict is not None:
        doms = [d & r for d, r in zip(doms, restrict)]
    for v, x in (p or {}).items():
        doms[v] &= 1 << x
    return doms


def enumerate_extensions(
    g: Graph,
    h: Graph,
    p: Mapping[int, int] | None = None,
    cap: int = 10**6,
    black_restricted: bool = False,
) -> list[Hom]:
    """All homomorphisms extending ``p``, lexicographic in G's vertex order."""
    p = dict(p or {})
    free = g.n - len(p)
    if h.n**free > cap:
        raise CapExceeded(f"{h.n}^{free} candidate maps exceeds cap {cap}")
    restrict = black_domains(g, h, p) if black_restricted else None
    csp = _hom_csp(g, h)
    return [tuple(sol) for sol in csp.solutions(_base_domains(csp, g, p, restrict))]


def hom_adjacent(phi: Sequence[int], psi: Sequence[int], g: Graph, h: Graph, mode: EdgeMode = WALK) -> bool:
    for m in (phi, psi):
        if not is_homomorphism(g, h, m):
            raise InvalidHomomorphism("hom_adjacent needs two homomorphisms")
    if mode == RECONFIG and sum(a != b for a, b in zip(phi, psi)) != 1:
        return False
    for u in range(g.n):
        need = 0
        for v in iter_bits(g.masks[u]):
            need |= 1 << psi[v]
        if need & ~h.masks[phi[u]]:
            return False
    return True


def _walk_window(g: Graph, h: Graph, phi: Sequence[int]) -> list[int]:
    """Per G-vertex, the H-vertices adjacent to the phi-image of every G-neighbour."""
    full = (1 << h.n) - 1
    window = []
    for v in range(g.n):
        m = full
        for u in iter_bits(g.masks[v]):
            m &= h.masks[phi[u]]
        window.append(m)
    return window


def walk_neighbours(
    g: Graph,
    h: Graph,
    phi: Hom,
    p: Mapping[int, int] | None = None,
    restrict: list[int] | None = None,
    csp=None,
) -> Iterator[Hom]:
    """WALK-neighbours of ``phi`` extending ``p`` (``phi`` itself included)."""
    csp = csp or _hom_csp(g, h)
    doms = _base_domains(csp, g, p, restrict)
    doms = [d & w for d, w in zip(doms, _walk_window(g, h, phi))]
    for sol in csp.solutions(doms):
        yield tuple(sol)


def reconfig_neighbours(
    g: Graph,
    h: Graph,
    phi: Hom,
    p: Mapping[int, int] | None = None,
    restrict: list[int] | None = None,
) -> Iterator[Hom]:
    """Homomorphisms that differ from ``phi`` on one vertex and are WALK-adjacent."""
    window = _walk_window(g, h, phi)
    loop_mask = h.loop_mask
    pinned = set(p or ())
    for v in range(g.n):
        if v in pinned:
            continue
        cand = window[v] & ~(1 << phi[v])
        if g.looped(v):
            cand &= loop_mask
        if restrict is not None:
            cand &= restrict[v]
        for y in iter_bits(cand):
            yield phi[:v] + (y,) + phi[v + 1 :]


def _neighbour_fn(g, h, p, mode, restrict):
    if mode == RECONFIG:
        return lambda m: reconfig_neighbours(g, h, m, p, restrict)
    csp = _hom_csp(g, h)
    return lambda m: (x for x in walk_neighbours(g, h, m, p, restrict, csp) if x != m)


def oracle_bfs(
    g: Graph,
    h: Graph,
    p: Mapping[int, int] | None,
    source: Hom,
    mode: EdgeMode = WALK,
    goal: Hom | None = None,
    cap: int = 10**6,
    black_restricted: bool = False,
) -> dict[Hom, Hom | None]:
    """BFS parents over the implicit Hom-graph, stopping early at ``goal``."""
    check_extension(g, h, source, p)
    restrict = black_domains(g, h, p) if black_restricted else None
    nbrs = _neighbour_fn(g, h, p, mode, restrict)
    parent: dict[Hom, Hom | None] = {source: None}
    queue = deque([source])
    while queue:
        m = queue.popleft()
        if m == goal:
            break
        for x in nbrs(m):
            if x not in parent:
                parent[x] = m
                if len(parent) > cap:
                    raise CapExceeded(f"oracle BFS visited more than {cap} maps")
                queue.append(x)
    return parent


def oracle_path(
    g: Graph,
    h: Graph,
    p: Mapping[int, int] | None,
    phi: Hom,
    psi: Hom,
    mode: EdgeMode = WALK,
    cap: int = 10**6,
) -> list[Hom] | None:
    """A shortest path from ``phi`` to ``psi``, or None when disconnected."""
    check_extension(g, h, psi, p)
    parent = oracle_bfs(g, h, p, phi, mode, goal=psi, cap=cap)
    if psi not in parent:
        return None
    out = [psi]
    while parent[out[-1]] is not None:
        out.append(parent[out[-1]])
    return out[::-1]


def oracle_distance(
    g: Graph,
    h: Graph,
    p: Mapping[int, int] | None,
    phi: Hom,
    psi: Hom,
    mode: EdgeMode = WALK,
    cap: int = 10**6,
):
    found = oracle_path(g, h, p, phi, psi, mode, cap)
    return INFINITE if found is None else len(found) - 1


@dataclass(eq=False)
class HomGraph:
    g: Graph
    h: Graph
    pins: dict[int, int]
    mode: EdgeMode
    black_restricted: bool
    nodes: list[Hom]
    index: dict[Hom, int]
    adjacency: list[tuple[int, ...]]
    component: list[int] = field(default_factory=list)
    _diameters: dict[int, int] = field(default_factory=dict, repr=False)
    _masks: list[int] | None = field(default=None, repr=False)

    def __len__(self) -> int:
        return len(self.nodes)

    @property
    def component_count(self) -> int:
        return len(set(self.component))

    def is_connected(self) -> bool:
        return self.component_count <= 1

    def component_members(self, label: int) -> list[int]:
        return [i for i, c in enumerate(self.component) if c == label]

    def bfs(self, source: int) -> list:
        dist: list = [INFINITE] * len(self.nodes)
        dist[source] = 0
        queue = deque([source])
        while queue:
            x = queue.popleft()
            for y in self.adjacency[x]:
                if dist[y] is INFINITE:
                    dist[y] = dist[x] + 1
                    queue.append(y)
        return dist

    def distance(self, a: Hom | int, b: Hom | int):
        i = a if isinstance(a, int) else self.index[a]
        j = b if isinstance(b, int) else self.index[b]
        return self.bfs(i)[j]

    def shortest_path(self, a: Hom, b: Hom) -> list[Hom] | None:
        i, j = self.index[a], self.index[b]
        parent = {i: -1}
        queue = deque([i])
        while queue:
            x = queue.popleft()
            if x == j:
                break
            for y in self.adjacency[x]:
                if y not in parent:
                    parent[y] = x
                    queue.append(y)
        if j not in parent:
            return None
        out = [j]
        while parent[out[-1]] >= 0:
            out.append(parent[out[-1]])
        return [self.nodes[k] for k in reversed(out)]

    def _adjacency_masks(self) -> list[int]:
        if self._masks is None:
            self._masks = [sum(1 << j for j in nb) for nb in self.adjacency]
        return self._masks

    def eccentricity(self, source: int) -> int:
        """Largest finite BFS distance from ``source`` (bitset layers)."""
        masks = self._adjacency_masks()
        seen = frontier = 1 << source
        ecc = 0
        while True:
            nxt = 0
            for j in iter_bits(frontier):
                nxt |= masks[j]
            nxt &= ~seen
            if not nxt:
                return ecc
            seen |= nxt
            frontier = nxt
            ecc += 1

    def diameter(self, label: int | None = None) -> int:
        """Diameter of one component (default: the largest over components)."""
        labels = sorted(set(self.component)) if label is None else [label]
        best = 0
        for lab in labels:
            if lab not in self._diameters:
                self._diameters[lab] = max(
                    (self.eccentricity(i) for i in self.component_members(lab)), default=0
                )
            best = max(best, self._diameters[lab])
        return best

    def to_dot(self, max_nodes: int = 2000) -> str:
        if len(self.nodes) > max_nodes:
            raise CapExceeded(f"DOT export of {len(self.nodes)} nodes exceeds {max_nodes}")

        def label(m: Hom) -> str:
            return ",".join(f"{self.g.vertices[i]}={self.h.vertices[x]}" for i, x in enumerate(m))

        lines = [f"graph hom_{self.mode.value} {{"]
        for i, m in enumerate(self.nodes):
            lines.append(f'  n{i} [label="{label(m)}"];')
        for i, nb in enumerate(self.adjacency):
            for j in nb:
                if i < j:
                    lines.append(f"  n{i} -- n{j};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def hom_graph(
    g: Graph,
    h: Graph,
    p: Mapping[int, int] | None = None,
    mode: EdgeMode = WALK,
    black_restricted: bool = False,
    cap: int = 10**6,
) -> HomGraph:
    """Explicit Hom(G, H; p) under the given edge notion, with components."""
    p = dict(p or {})
    mode = EdgeMode(mode)
    restrict = black_domains(g, h, p) if black_restricted else None
    applied = restrict is not None
    nodes = enumerate_extensions(g, h, p, cap=cap) if not applied else [
        m for m in enumerate_extensions(g, h, p, cap=cap)
        if all(restrict[v] >> x & 1 for v, x in enumerate(m))
    ]
    index = {m: i for i, m in enumerate(nodes)}
    nbrs = _neighbour_fn(g, h, p, mode, restrict)
    adjacency = [tuple(sorted(index[x] for x in nbrs(m))) for m in nodes]
    hg = HomGraph(g, h, p, mode, applied, nodes, index, adjacency)
    label = [-1] * len(nodes)
    count = 0
    for s in range(len(nodes)):
        if label[s] >= 0:
            continue
        label[s] = count
        queue = deque([s])
        while queue:
            x = queue.popleft()
            for y in adjacency[x]:
                if label[y] < 0:
                    label[y] = count
                    queue.append(y)
        count += 1
    hg.component = label
    return hg
