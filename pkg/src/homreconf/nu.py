"""Near-unanimity detection.

``is_nu`` decides NU-ness (for some arity) by dismantling the diagonal
component of ``H x H`` to its diagonal.  ``find_majority`` searches for an
explicit 3-ary NU polymorphism, and the tree routines look for small
critical tree obstructions.  The last two are independent of the first and
serve as its oracles.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Mapping

from ._kernels import make_csp
from .dismantle import DismantlingSequence, greedy_dismantle
from .errors import CapExceeded, InvalidCertificate
from .families import spider
from .graph import Graph, iter_bits, square_with_diagonal

__all__ = [
    "NuVerdict",
    "MajorityTable",
    "TreeObstruction",
    "is_nu",
    "find_majority",
    "parse_majority",
    "median_majority",
    "tree_extension_solvable",
    "find_3leaf_obstruction",
]


@dataclass(frozen=True)
class NuVerdict:
    nu: bool
    certificate: DismantlingSequence

    @property
    def stuck_retract(self) -> frozenset[int]:
        return self.certificate.survivors

    def __bool__(self) -> bool:
        return self.nu


def is_nu(h: Graph) -> NuVerdict:
    """NU for some arity iff the diagonal component of H^2 dismantles to the diagonal."""
    if not h.is_connected():
        raise ValueError("is_nu requires a connected graph")
    ds = square_with_diagonal(h)
    seq = greedy_dismantle(ds.component, ds.diagonal_component_indices)
    return NuVerdict(seq.complete, seq)


@dataclass(frozen=True, eq=False)
class MajorityTable:
    """A ternary NU polymorphism; ``values[(a*n + b)*n + c] = f(a, b, c)``."""

    h: Graph
    values: tuple[int, ...]

    def __call__(self, a: int, b: int, c: int) -> int:
        n = self.h.n
        return self.values[(a * n + b) * n + c]

    def validate(self) -> None:
        h, n = self.h, self.h.n
        if len(self.values) != n**3:
            raise InvalidCertificate("table has the wrong size")
        for x in range(n):
            for y in range(n):
                for t in ((x, x, y), (x, y, x), (y, x, x)):
                    if self(*t) != x:
                        raise InvalidCertificate(f"not near-unanimous at {t}")
        masks = h.masks
        for a, b, c in itertools.product(range(n), repeat=3):
            fa = self(a, b, c)
            for a2 in iter_bits(masks[a]):
                for b2 in iter_bits(masks[b]):
                    for c2 in iter_bits(masks[c]):
                        if not h.adjacent(fa, self(a2, b2, c2)):
                            raise InvalidCertificate(
                                f"edge ({a},{b},{c})~({a2},{b2},{c2}) not preserved"
                            )

    def is_valid(self) -> bool:
        try:
            self.validate()
        except InvalidCertificate:
            return False
        return True

    def format(self) -> str:
        names = self.h.vertices
        n = self.h.n
        return "".join(
            f"{names[a]} {names[b]} {names[c]} -> {names[self(a, b, c)]}\n"
            for a, b, c in itertools.product(range(n), repeat=3)
        )


def parse_majority(text: str, h: Graph) -> MajorityTable:
    n = h.n
    values = [-1] * n**3
    for line in text.splitlines():
        if not line.strip():
            continue
        lhs, arrow, rhs = line.partition("->")
        args = lhs.split()
        if not arrow or len(args) != 3:
            raise ValueError(f"bad majority line {line!r}")
        a, b, c = (h.idx(t) for t in args)
        values[(a * n + b) * n + c] = h.idx(rhs.strip())
    if -1 in values:
        raise ValueError("majority table is incomplete")
    return MajorityTable(h, tuple(values))


def _cube_csp(h: Graph, backend: str | None = None):
    n = h.n
    masks = h.masks
    var_nbrs = []
    var_looped = []
    for a, b, c in itertools.product(range(n), repeat=3):
        t = (a * n + b) * n + c
        nb = [
            (a2 * n + b2) * n + c2
            for a2 in iter_bits(masks[a])
            for b2 in iter_bits(masks[b])
            for c2 in iter_bits(masks[c])
        ]
        var_nbrs.append([x for x in nb if x != t])
        var_looped.append(h.looped(a) and h.looped(b) and h.looped(c))
    return make_csp(var_nbrs, var_looped, masks, h.loop_mask, backend=backend)


def find_majority(h: Graph, cap: int = 8, backend: str | None = None) -> MajorityTable | None:
    """First majority table (cells in lexicographic order), or None.

    Near-unanimous cells are pinned; the remaining cells are searched with
    arc consistency maintained at every node.
    """
    n = h.n
    if n > cap:
        raise CapExceeded(f"find_majority: {n} vertices exceeds cap {cap}")
    if n == 0:
        return None
    csp = _cube_csp(h, backend)
    domains = csp.initial_domains()
    for x in range(n):
        for y in range(n):
            for a, b, c in ((x, x, y), (x, y, x), (y, x, x)):
                domains[(a * n + b) * n + c] &= 1 << x
    sol = csp.first_solution(domains, order="lex")
    if sol is None:
        return None
    table = MajorityTable(h, tuple(sol))
    table.validate()
    return table


def median_majority(h: Graph) -> MajorityTable | None:
    """The median map of a median graph, if every triple has a unique median.

    Distances ignore loops.  Returned only when it validates, so this is a
    constructive shortcut for large hosts (e.g. hypercubes), not a decision
    procedure.
    """
    from .graph import INFINITE, distance_matrix

    d = distance_matrix(h.without_loops())
    n = h.n
    values = []
    for a, b, c in itertools.product(range(n), repeat=3):
        meds = [
            m
            for m in range(n)
            if d[a][m] is not INFINITE
            and d[a][m] + d[m][b] == d[a][b]
            and d[b][m] + d[m][c] == d[b][c]
            and d[a][m] + d[m][c] == d[a][c]
        ]
        if len(meds) != 1:
            return None
        values.append(meds[0])
    table = MajorityTable(h, tuple(values))
    return table if table.is_valid() else None


def _is_tree(t: Graph) -> bool:
    return t.is_connected() and t.is_irreflexive() and t.edge_count() == t.n - 1


def tree_extension_solvable(t: Graph, pins: Mapping[int, int], h: Graph) -> bool:
    """Whether the pinned tree maps to H; exact leaf-to-root propagation."""
    if not _is_tree(t):
        raise ValueError("tree_extension_solvable requires a tree")
    return _forest_solvable(t, pins, h)


def _forest_solvable(t: Graph, pins: Mapping[int, int], h: Graph) -> bool:
    full = (1 << h.n) - 1
    seen = [False] * t.n
    for root in range(t.n):
        if seen[root]:
            continue
        order, parent = [root], {root: -1}
        seen[root] = True
        for x in order:
            for y in iter_bits(t.masks[x]):
                if not seen[y]:
                    seen[y] = True
                    parent[y] = x
                    order.append(y)
        dom = {x: (1 << pins[x]) if x in pins else full for x in order}
        for x in reversed(order):
            if not dom[x]:
                return False
            p = parent[x]
            if p >= 0:
                sup = 0
                for v in iter_bits(dom[x]):
                    sup |= h.masks[v]
                dom[p] &= sup
    return True


@dataclass(frozen=True, eq=False)
class TreeObstruction:
    tree: Graph
    pins: dict[int, int]
    h: Graph

    def verify(self) -> bool:
        """No extension, but one after deleting any single edge."""
        if tree_extension_solvable(self.tree, self.pins, self.h):
            return False
        t = self.tree
        for i, j in t.edges():
            masks = list(t.masks)
            masks[i] &= ~(1 << j)
            masks[j] &= ~(1 << i)
            if not _forest_solvable(Graph.from_masks(t.vertices, masks), self.pins, self.h):
                return False
        return True


def _walk_reach(h: Graph, start: int, steps: int) -> int:
    mask = 1 << start
    for _ in range(steps):
        sup = 0
        for v in iter_bits(mask):
            sup |= h.masks[v]
        mask = sup
    return mask


def find_3leaf_obstruction(h: Graph, depth_bound: int) -> TreeObstruction | None:
    """Search 3-branch spiders (branch lengths up to ``depth_bound``, leaves
    pinned to every vertex triple) for a critical obstruction."""
    if depth_bound < 1:
        raise ValueError("depth_bound must be at least 1")
    n = h.n
    for total in range(3, 3 * depth_bound + 1):
        for lengths in itertools.combinations_with_replacement(range(1, depth_bound + 1), 3):
            if sum(lengths) != total:
                continue
            reach = [
                [_walk_reach(h, x, length) for x in range(n)] for length in lengths
            ]
            for x, y, z in itertools.product(range(n), repeat=3):
                if reach[0][x] & reach[1][y] & reach[2][z]:
                    continue
                tree = spider(lengths)
                leaves = [tree.idx(f"{b}.{length}") for b, length in enumerate(lengths)]
                obstruction = TreeObstruction(tree, dict(zip(leaves, (x, y, z))), h)
                if obstruction.verify():
                    return obstruction
    return None
