from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from homreconf.errors import CapExceeded, InvalidHomomorphism
from homreconf.families import complete, cycle, path
from homreconf.graph import INFINITE, Graph
from homreconf.homgraph import (
    RECONFIG,
    WALK,
    check_extension,
    enumerate_extensions,
    hom_adjacent,
    hom_from_names,
    hom_graph,
    is_homomorphism,
    oracle_distance,
    oracle_path,
)

from conftest import graphs


def brute_homs(g, h, p=None):
    return [
        m
        for m in itertools.product(range(h.n), repeat=g.n)
        if is_homomorphism(g, h, m) and all(m[v] == x for v, x in (p or {}).items())
    ]


@given(graphs(max_n=3), graphs(max_n=4))
@settings(max_examples=120, deadline=None)
def test_enumeration_matches_brute_force(g, h):
    assert enumerate_extensions(g, h) == brute_homs(g, h)


@given(graphs(max_n=3), graphs(max_n=4), st.data())
@settings(max_examples=80, deadline=None)
def test_pinned_enumeration(g, h, data):
    homs = brute_homs(g, h)
    if not homs:
        return
    base = data.draw(st.sampled_from(homs))
    keep = data.draw(st.lists(st.integers(0, g.n - 1), unique=True, max_size=g.n))
    p = {v: base[v] for v in keep}
    assert enumerate_extensions(g, h, p) == brute_homs(g, h, p)


def test_hom_adjacency_walk_and_reconfig():
    g, h = path(1), path(2, looped=True)
    assert hom_adjacent((0, 1), (1, 0), g, h, WALK)
    assert not hom_adjacent((0, 1), (1, 0), g, h, RECONFIG)  # two vertices change
    assert not hom_adjacent((0, 1), (1, 2), g, h, WALK)  # 0 is not adjacent to 2
    assert hom_adjacent((1, 1), (1, 2), g, h, RECONFIG)
    with pytest.raises(InvalidHomomorphism):
        hom_adjacent((0, 2), (0, 1), g, h)


def test_walk_adjacency_is_reflexive_and_symmetric():
    g, h = path(2), cycle(5, looped=True)
    homs = enumerate_extensions(g, h)
    for a in homs:
        assert hom_adjacent(a, a, g, h)
    for a, b in itertools.product(homs[:20], repeat=2):
        assert hom_adjacent(a, b, g, h) == hom_adjacent(b, a, g, h)


def test_hom_graph_k2_into_k2_swap_is_isolated():
    k2 = complete(2)
    hg = hom_graph(k2, k2, mode=RECONFIG)
    assert len(hg) == 2 and hg.component_count == 2
    # without loops the swap is not a walk step either
    assert hom_graph(k2, k2, mode=WALK).component_count == 2
    looped = k2.with_loops([0])
    assert hom_graph(k2, looped, mode=WALK).is_connected()


def test_hom_graph_distances_match_oracle():
    g, h = path(2), path(3, looped=True)
    hg = hom_graph(g, h, mode=RECONFIG)
    for a in hg.nodes[:6]:
        for b in hg.nodes[-6:]:
            assert hg.distance(a, b) == oracle_distance(g, h, {}, a, b, RECONFIG)
            sp = hg.shortest_path(a, b)
            assert len(sp) - 1 == hg.distance(a, b)


def test_diameter_and_dot():
    hg = hom_graph(Graph("a"), path(3), mode=RECONFIG)
    assert hg.diameter() == 1  # an isolated vertex can jump anywhere
    dot = hg.to_dot()
    assert dot.startswith("graph hom_reconfig") and dot.count("--") == 6


def test_oracle_disconnected_and_cap():
    k2 = complete(2)
    assert oracle_distance(k2, k2, {}, (0, 1), (1, 0), RECONFIG) is INFINITE
    assert oracle_path(k2, k2, {}, (0, 1), (1, 0), RECONFIG) is None
    with pytest.raises(CapExceeded):
        enumerate_extensions(path(6), path(5, looped=True), cap=100)


def test_black_restriction():
    g, h = path(2), path(2)
    full = hom_graph(g, h)
    black = hom_graph(g, h, black_restricted=True)
    assert black.black_restricted and len(black) < len(full)
    assert all(m[0] in (0, 2) for m in black.nodes)
    with pytest.warns(UserWarning):
        hom_graph(g, complete(3), black_restricted=True)


def test_names_and_extension_checks():
    g, h = path(1), path(2)
    m = hom_from_names(g, h, {"0": "1", "1": "2"})
    assert m == (1, 2)
    with pytest.raises(InvalidHomomorphism):
        hom_from_names(g, h, {"0": "1"})
    with pytest.raises(InvalidHomomorphism):
        check_extension(g, h, (1, 2), {0: 0})
