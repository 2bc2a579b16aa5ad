"""Compare the compiled and pure-Python CSP kernels on representative workloads.

    python benchmarks/bench_kernels.py --repeat 3
"""

from __future__ import annotations

import argparse
import time
from typing import Callable

from homreconf._kernels import BACKEND, make_csp
from homreconf.families import cycle, grid_example, hypercube, king, path
from homreconf.homgraph import _walk_window, hom_from_names, pins_from_names
from homreconf.nu import _cube_csp
from homreconf.solver import ladder


def majority_search(h, backend: str) -> Callable[[], object]:
    def run():
        n = h.n
        csp = _cube_csp(h, backend)
        doms = csp.initial_domains()
        for x in range(n):
            for y in range(n):
                for a, b, c in ((x, x, y), (x, y, x), (y, x, x)):
                    doms[(a * n + b) * n + c] &= 1 << x
        return csp.first_solution(doms, order="lex")

    return run


def extension_count(g, h, p, backend: str) -> Callable[[], object]:
    def run():
        csp = make_csp(csp_nbrs(g), [g.looped(v) for v in range(g.n)], h.masks, h.loop_mask, backend)
        doms = csp.initial_domains()
        for v, x in p.items():
            doms[v] &= 1 << x
        return sum(1 for _ in csp.solutions(doms))

    return run


def csp_nbrs(g):
    return [[u for u in g.nbrs(v) if u != v] for v in range(g.n)]


def ladder_solve(g, h, phi, psi, p, length: int, backend: str) -> Callable[[], object]:
    inst = ladder(g, length, phi, psi, p)
    lg = inst.graph

    def run():
        csp = make_csp(csp_nbrs(lg), [lg.looped(v) for v in range(lg.n)], h.masks, h.loop_mask, backend)
        doms = csp.initial_domains()
        for v, x in inst.pins.items():
            doms[v] &= 1 << x
        return csp.first_solution(doms, order="mrv")

    return run


def neighbour_scan(g, h, m, backend: str) -> Callable[[], object]:
    def run():
        csp = make_csp(csp_nbrs(g), [g.looped(v) for v in range(g.n)], h.masks, h.loop_mask, backend)
        doms = [d & w for d, w in zip(csp.initial_domains(), _walk_window(g, h, m))]
        return sum(1 for _ in csp.solutions(doms))

    return run


def workloads():
    g, h, pins, phi, psi = grid_example(5)
    p = pins_from_names(g, h, pins)
    a, b = hom_from_names(g, h, phi), hom_from_names(g, h, psi)
    yield "majority, king 2 (3x3)", lambda be: majority_search(king(2), be)
    yield "majority, reflexive path P7", lambda be: majority_search(path(7, looped=True), be)
    yield "majority, C8 (none exists)", lambda be: majority_search(cycle(8), be)
    yield "majority, Q3 (none exists)", lambda be: majority_search(hypercube(3), be)
    yield "extensions, P4 into king 3", lambda be: extension_count(path(4), king(3), {}, be)
    yield "ladder l=9, grid n=5", lambda be: ladder_solve(g, h, a, b, p, 9, be)
    diag = tuple(7 * min(v, 5) for v in range(7))  # P6 along the diagonal of the 6x6 king graph
    yield "walk window, P6 into king 5", lambda be: neighbour_scan(path(6), king(5), diag, be)


def best_of(fn: Callable[[], object], repeat: int) -> tuple[float, object]:
    best, out = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3, help="runs per workload (best is kept)")
    args = parser.parse_args()
    if BACKEND != "cython":
        raise SystemExit("compiled kernel not built; run `pip install -e . --no-build-isolation`")
    print(f"{'workload':32} {'python s':>10} {'cython s':>10} {'speedup':>8}")
    for name, make in workloads():
        tp, out_p = best_of(make("python"), args.repeat)
        tc, out_c = best_of(make("cython"), args.repeat)
        if out_p != out_c:
            raise SystemExit(f"{name}: backends disagree")
        print(f"{name:32} {tp:10.4f} {tc:10.4f} {tp / tc:8.1f}x")


if __name__ == "__main__":
    main()
