from __future__ import annotations

import random

import pytest

from homreconf.errors import InvalidHomomorphism
from homreconf.families import complete, cycle, path, random_connected_graph, small_connected_graphs
from homreconf.graph import INFINITE
from homreconf.homgraph import WALK, enumerate_extensions, hom_adjacent, oracle_distance
from homreconf.solver import (
    DomainTable,
    arc_consistency,
    default_walk_cap,
    ladder,
    shortest_hom_walk,
    solve_extension,
    walk_lower_bound,
)


def test_solve_extension():
    assert solve_extension(complete(3), complete(2)) is None
    m = solve_extension(cycle(5), complete(3), {0: 2})
    assert m is not None and m[0] == 2
    assert solve_extension(path(1), path(1), {0: 0, 1: 0}) is None


def test_arc_consistency_prunes_and_wipes_out():
    g, h = path(2), path(2)
    doms = DomainTable.full(g, h, {0: 0})
    out = arc_consistency(g, h, doms)
    assert out.domains[1] == frozenset({1})
    assert out.domains[2] == frozenset({0, 2})
    bad = arc_consistency(g, h, DomainTable.full(g, h, {0: 0, 1: 0}))
    assert bad.unsatisfiable


def test_ladder_layout():
    g = path(1)
    inst = ladder(g, 3, (0, 1), (1, 0), {0: 0})
    assert inst.graph.n == 8
    assert inst.pins[0] == 0 and inst.pins[7] == 0 and inst.pins[3 * 2 + 1] == 0
    assert inst.pins[2] == 0  # pinned vertex is fixed on every rung


def test_walk_lower_bound():
    g, h = path(1, looped=True), path(4, looped=True)
    assert walk_lower_bound(g, h, (0, 0), (4, 4)) == 4
    assert walk_lower_bound(path(1), path(4), (0, 1), (4, 3)) == 2
    assert default_walk_cap(h, True) == 10 and default_walk_cap(h, False) == 50


def test_shortest_walk_is_a_walk():
    g, h = path(2), path(4, looped=True)
    phi, psi = (0, 0, 0), (4, 4, 4)
    w = shortest_hom_walk(g, h, {}, phi, psi, 10)
    assert w[0] == phi and w[-1] == psi and len(w) - 1 == 4
    for a, b in zip(w, w[1:]):
        assert hom_adjacent(a, b, g, h)


def test_shortest_walk_none_when_disconnected():
    k3 = complete(3)
    assert shortest_hom_walk(k3, k3, {}, (0, 1, 2), (1, 0, 2), 9) is None


def test_invalid_endpoint():
    with pytest.raises(InvalidHomomorphism):
        shortest_hom_walk(path(1), path(1), {}, (0, 0), (0, 1), 3)


def test_agrees_with_oracle_on_random_instances():
    rng = random.Random(11)
    gs = list(small_connected_graphs(3))
    for _ in range(40):
        g = rng.choice(gs)
        h = random_connected_graph(rng.randint(2, 4), rng)
        homs = enumerate_extensions(g, h)
        if not homs:
            continue
        phi, psi = rng.choice(homs), rng.choice(homs)
        d = oracle_distance(g, h, {}, phi, psi, WALK)
        w = shortest_hom_walk(g, h, {}, phi, psi, 2 * h.n * h.n)
        if d is INFINITE:
            assert w is None
        else:
            assert w is not None and len(w) - 1 == d
