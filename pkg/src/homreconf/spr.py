"""Shortest-path reconfiguration as an extension problem.

A shortest u-v path in an irreflexive host is exactly a homomorphism from
the path ``P_d`` (``d = d(u, v)``) pinning its ends to ``u`` and ``v``.
Adding loops never creates shorter u-v walks, so reconfiguration over a
looped NU host yields paths over the original host.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field, replace
from itertools import combinations
from math import comb
from typing import Iterable, Sequence

from .families import path
from .graph import INFINITE, Graph, distance_matrix
from .homgraph import RECONFIG, Hom, check_extension, hom_graph
from .nu import find_majority, is_nu
from .reconfig import BoundCertificate, ReconfigResult, reconfigure

__all__ = [
    "SprInstance",
    "SprResult",
    "SpTrivialVerdict",
    "spr_instance",
    "spr_reconfigure",
    "sp_trivial_check",
    "nu_spr_bound",
    "majority_spr_bound",
    "hypercube_path",
]


@dataclass(frozen=True, eq=False)
class SprInstance:
    host: Graph
    u: int
    v: int
    d: int
    path_graph: Graph
    pins: dict[int, int]

    def hom_from_path(self, vertices: Sequence[str] | Sequence[int]) -> Hom:
        """A u-v path given by host vertex names (or indices) as a map on P_d."""
        m = tuple(self.host.idx(x) if isinstance(x, str) else int(x) for x in vertices)
        if len(m) != self.d + 1:
            raise ValueError(f"expected {self.d + 1} vertices, got {len(m)}")
        check_extension(self.path_graph, self.host, m, self.pins)
        return m

    def names(self, m: Hom) -> list[str]:
        return [self.host.vertices[x] for x in m]


def _strip(h: Graph) -> Graph:
    if h.loops:
        warnings.warn("host has loops; shortest paths never use them, stripping", stacklevel=3)
        return h.without_loops()
    return h


def spr_instance(h: Graph, u: str | int, v: str | int) -> SprInstance:
    h = _strip(h)
    ui = h.idx(u) if isinstance(u, str) else u
    vi = h.idx(v) if isinstance(v, str) else v
    d = distance_matrix(h)[ui][vi]
    if d is INFINITE:
        raise ValueError(f"{h.vertices[ui]} and {h.vertices[vi]} are not connected")
    pd = path(d)
    pins = {0: ui} if d == 0 else {0: ui, d: vi}
    return SprInstance(h, ui, vi, d, pd, pins)


def majority_spr_bound(d: int) -> float:
    """Length bound d^2/2 - 1 for hosts that are 3-NU after adding loops (d >= 2)."""
    return d * d / 2 - 1


def nu_spr_bound(d: int, k: int) -> int:
    return (k - 2) * comb(d + 1, 2)


@dataclass(frozen=True)
class SprResult:
    instance: SprInstance
    result: ReconfigResult
    route: str  # "trivial", "loops=all", "loops=none", "loops=custom" or "oracle"
    bounds: dict = field(default_factory=dict)
    k: int | None = None

    @property
    def status(self) -> str:
        return self.result.status

    @property
    def length(self) -> int | None:
        return self.result.length


def _loop_hosts(h: Graph, loop_sets) -> Iterable[tuple[str, Graph]]:
    if loop_sets is None:
        yield "loops=all", h.with_loops(range(h.n))
        yield "loops=none", h
        return
    for s in loop_sets:
        yield "loops=custom", h.with_loops(s)


def spr_reconfigure(
    inst: SprInstance,
    phi: Sequence[int],
    psi: Sequence[int],
    loop_sets: Iterable[Iterable[int]] | None = None,
    k: int | None = None,
    oracle_cap: int = 10**6,
    majority_cap: int = 8,
) -> SprResult:
    """Reconfigure one shortest u-v path into another.

    Goes through ``reconfigure`` over the first loop-augmented host that is
    NU (loops on every vertex, then none, unless ``loop_sets`` is given);
    otherwise the brute-force oracle decides.  ``k`` is the arity of a known
    NU polymorphism of that host and only feeds the informational bound.
    """
    g, h, p = inst.path_graph, inst.host, inst.pins
    phi, psi = tuple(phi), tuple(psi)
    check_extension(g, h, phi, p)
    check_extension(g, h, psi, p)
    d = inst.d
    if d <= 1 or phi == psi:
        # the pins fix everything, or there is nothing to do
        res = reconfigure(g, h, p, phi, psi)
        return SprResult(inst, res, "trivial")

    for route, host in _loop_hosts(h, loop_sets):
        if not host.is_connected() or not is_nu(host):
            continue
        res = reconfigure(g, host, p, phi, psi)
        if res.status != "ok":
            continue
        res.path.validate(g, h)
        bounds = {}
        arity = k
        if arity is None and host.n <= majority_cap and find_majority(host, cap=majority_cap) is not None:
            arity = 3
        if arity == 3:
            bounds["d^2/2-1"] = majority_spr_bound(d)
        if arity is not None:
            bounds["(k-2)binom(d+1,2)"] = nu_spr_bound(d, arity)
        if "d^2/2-1" in bounds and res.path.length <= bounds["d^2/2-1"]:
            res = _recertify(res, "d^2/2-1", bounds["d^2/2-1"])
        return SprResult(inst, res, route, bounds, arity)

    res = reconfigure(g, h, p, phi, psi, oracle=True, oracle_cap=oracle_cap)
    return SprResult(inst, res, "oracle", {"d^2/2-1": majority_spr_bound(d)}, k)


def _recertify(res: ReconfigResult, name: str, value) -> ReconfigResult:
    return replace(res, certificate=BoundCertificate(name, value, res.certificate.kind))


@dataclass(frozen=True)
class SpTrivialVerdict:
    sufficient: bool
    exact: bool | None
    fired: str  # "sufficient", "exact" or "none"
    failures: tuple[tuple[int, int], ...] = ()

    @property
    def trivial(self) -> bool | None:
        if self.sufficient:
            return True
        return self.exact


def sp_trivial_check(
    h: Graph,
    loops: Iterable[int] = (),
    exhaustive_cap: int = 10**5,
    exact: bool = True,
) -> SpTrivialVerdict:
    """Sufficient test (``H`` plus ``loops`` is NU) and, if asked, the exact
    test: every pair's Hom(P_d, H; p) is connected."""
    h = _strip(h)
    host = h.with_loops(loops)
    sufficient = host.is_connected() and bool(is_nu(host))
    if not exact:
        return SpTrivialVerdict(sufficient, None, "sufficient" if sufficient else "none")
    failures = []
    for u, v in combinations(range(h.n), 2):
        inst = spr_instance(h, u, v)
        if inst.d <= 1:
            continue
        hg = hom_graph(inst.path_graph, h, inst.pins, RECONFIG, cap=exhaustive_cap)
        if hg.component_count > 1:
            failures.append((u, v))
    exact_ok = not failures
    fired = "sufficient" if sufficient else "exact"
    return SpTrivialVerdict(sufficient, exact_ok, fired, tuple(failures))


def hypercube_path(d: int, order: Sequence[int], start: str | None = None) -> list[str]:
    """Vertices of the path flipping coordinates 1..d in ``order`` (1-based)."""
    cur = list(start or "0" * d)
    out = ["".join(cur)]
    for i in order:
        cur[i - 1] = "1" if cur[i - 1] == "0" else "0"
        out.append("".join(cur))
    return out
