from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from homreconf._kernels import BACKEND, make_csp
from homreconf.families import path

from conftest import graphs

needs_c = pytest.mark.skipif(BACKEND != "cython", reason="compiled kernel not built")


def csp_for(g, h, backend):
    nbrs = [[u for u in g.nbrs(v) if u != v] for v in range(g.n)]
    return make_csp(nbrs, [g.looped(v) for v in range(g.n)], h.masks, h.loop_mask, backend)


def test_python_backend_always_available():
    csp = csp_for(path(1), path(1), "python")
    assert list(csp.solutions(csp.initial_domains())) == [[0, 1], [1, 0]]


@needs_c
@given(graphs(max_n=4), graphs(max_n=5), st.data())
@settings(max_examples=150, deadline=None)
def test_backends_agree(g, h, data):
    py, c = csp_for(g, h, "python"), csp_for(g, h, "cython")
    doms = py.initial_domains()
    assert doms == c.initial_domains()
    full = (1 << h.n) - 1
    doms = [d & data.draw(st.integers(0, full)) for d in doms]
    assert list(py.solutions(list(doms))) == list(c.solutions(list(doms)))
    assert py.first_solution(list(doms), order="lex") == c.first_solution(list(doms), order="lex")
    a, b = list(doms), list(doms)
    ok = py.propagate(a)
    assert ok == c.propagate(b)
    if ok:  # after a wipe-out the domains are left partially reduced
        assert a == b
    for mask in range(1 << h.n):
        assert py.support(mask) == c.support(mask)


@needs_c
def test_wide_targets_fall_back():
    from homreconf.families import king

    big = king(8)  # 81 vertices
    csp = csp_for(path(1), big, None)
    assert type(csp).__module__.endswith("_pykernel")
    with pytest.raises(RuntimeError):
        csp_for(path(1), big, "cython")
