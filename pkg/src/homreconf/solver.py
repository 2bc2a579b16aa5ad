"""Arc-consistency backtracking for Ext(H) and the ladder walk search.

A walk ``h_0, ..., h_l`` in Hom(G, H; p) is the same thing as a
homomorphism from ``I_l x G`` (``I_l`` the reflexive path on ``0..l``) to H
whose copy ``i`` restricts to ``h_i``.  Pinning copy 0 to ``phi``, copy
``l`` to ``psi`` and the interior copies of pinned vertices to ``p`` turns
shortest-walk search into a sequence of extension problems.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .graph import INFINITE, Graph, categorical_product, distance_matrix, iter_bits
from .homgraph import Hom, _hom_csp, check_extension
from .families import path

__all__ = [
    "DomainTable",
    "LadderInstance",
    "arc_consistency",
    "solve_extension",
    "ladder",
    "walk_lower_bound",
    "shortest_hom_walk",
    "default_walk_cap",
]


@dataclass(frozen=True)
class DomainTable:
    domains: tuple[frozenset[int], ...]

    @property
    def unsatisfiable(self) -> bool:
        return any(not d for d in self.domains)

    @classmethod
    def full(cls, g: Graph, h: Graph, p: Mapping[int, int] | None = None) -> "DomainTable":
        p = p or {}
        everything = frozenset(range(h.n))
        return cls(tuple(frozenset({p[v]}) if v in p else everything for v in range(g.n)))


def _to_masks(domains: Sequence[frozenset[int]]) -> list[int]:
    return [sum(1 << x for x in d) for d in domains]


def arc_consistency(g: Graph, h: Graph, domains: DomainTable) -> DomainTable:
    """Largest arc-consistent sub-table; some domain is empty iff inconsistency was found."""
    csp = _hom_csp(g, h)
    masks = _to_masks(domains.domains)
    if not csp.propagate(masks):
        # report the wipe-out explicitly
        return DomainTable(tuple(frozenset() for _ in range(g.n)))
    return DomainTable(tuple(frozenset(iter_bits(m)) for m in masks))


def solve_extension(g: Graph, h: Graph, p: Mapping[int, int] | None = None) -> Hom | None:
    """Some homomorphism extending ``p`` (smallest-domain-first, values ascending)."""
    csp = _hom_csp(g, h)
    doms = csp.initial_domains()
    for v, x in (p or {}).items():
        doms[v] &= 1 << x
    sol = csp.first_solution(doms, order="mrv")
    return None if sol is None else tuple(sol)


@dataclass(frozen=True, eq=False)
class LadderInstance:
    graph: Graph
    pins: dict[int, int]
    length: int
    n_g: int

    def decode(self, solution: Sequence[int]) -> list[Hom]:
        # ladder vertex (i, g) has index i * n_g + g
        n = self.n_g
        return [tuple(solution[i * n : (i + 1) * n]) for i in range(self.length + 1)]


def ladder(g: Graph, length: int, phi: Hom, psi: Hom, p: Mapping[int, int] | None = None) -> LadderInstance:
    lad = categorical_product(path(length, looped=True), g)
    pins = {}
    n = g.n
    for v in range(n):
        pins[v] = phi[v]
        pins[length * n + v] = psi[v]
    for v, x in (p or {}).items():
        for i in range(1, length):
            pins[i * n + v] = x
    return LadderInstance(lad, pins, length, n)


def walk_lower_bound(g: Graph, h: Graph, phi: Hom, psi: Hom):
    """Cheap lower bound on WALK distance; INFINITE when no walk can exist.

    In one WALK step a looped G-vertex moves to an adjacent H-vertex, a
    vertex with some other neighbour moves at most distance 2, and an
    isolated vertex may jump anywhere.
    """
    if tuple(phi) == tuple(psi):
        return 0
    d = distance_matrix(h)
    lb = 1
    for v in range(g.n):
        if g.masks[v] == 0:
            continue
        dv = d[phi[v]][psi[v]]
        if dv is INFINITE:
            return INFINITE
        lb = max(lb, dv if g.looped(v) else (dv + 1) // 2)
    return lb


def default_walk_cap(h: Graph, has_majority: bool) -> int:
    """2(k-2)n_H with k = 3 when a majority is known, else 2 n_H^2."""
    return 2 * h.n if has_majority else 2 * h.n * h.n


def shortest_hom_walk(
    g: Graph,
    h: Graph,
    p: Mapping[int, int] | None,
    phi: Hom,
    psi: Hom,
    max_length: int,
) -> list[Hom] | None:
    """Minimum-length walk from ``phi`` to ``psi`` of length at most
    ``max_length`` in Hom(G, H; p), or None."""
    p = dict(p or {})
    check_extension(g, h, phi, p)
    check_extension(g, h, psi, p)
    lb = walk_lower_bound(g, h, phi, psi)
    if lb is INFINITE:
        return None
    for length in range(lb, max_length + 1):
        if length == 0:
            return [tuple(phi)]
        inst = ladder(g, length, phi, psi, p)
        sol = solve_extension(inst.graph, h, inst.pins)
        if sol is not None:
            return inst.decode(sol)
    return None
