"""Domination, dismantling sequences and their bipartite correspondences."""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .graph import (
    Graph,
    ProductGraph,
    bipartite_resolution,
    iter_bits,
    square_with_diagonal,
)

__all__ = [
    "DismantlingStep",
    "DismantlingSequence",
    "InvalidDismantling",
    "dominating_vertices",
    "greedy_dismantle",
    "resolve_bipartite",
    "symmetric_shadow",
    "efficient_dismantle_diagonal",
    "composed_retraction",
    "parse_dismantling",
]


class InvalidDismantling(ValueError):
    pass


@dataclass(frozen=True)
class DismantlingStep:
    removed: int
    into: int


@dataclass(frozen=True, eq=False)
class DismantlingSequence:
    """Steps applied to ``base`` in order.  ``complete`` is True when only
    the target survives; otherwise the survivors form the stuck retract.
    """

    base: Graph
    steps: tuple[DismantlingStep, ...]
    target: frozenset[int]
    stuck_at: int | None = field(default=None)

    def __len__(self) -> int:
        return len(self.steps)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DismantlingSequence):
            return NotImplemented
        return (
            self.base == other.base
            and self.steps == other.steps
            and self.target == other.target
        )

    __hash__ = None  # type: ignore[assignment]

    @property
    def survivors(self) -> frozenset[int]:
        removed = {s.removed for s in self.steps}
        return frozenset(i for i in range(self.base.n) if i not in removed)

    @property
    def complete(self) -> bool:
        return self.survivors == self.target

    def validate(self) -> None:
        """Replay every step against the shrinking retract."""
        g = self.base
        alive = (1 << g.n) - 1
        for k, step in enumerate(self.steps):
            v, w = step.removed, step.into
            if not (0 <= v < g.n and 0 <= w < g.n):
                raise InvalidDismantling(f"step {k}: vertex out of range")
            if v in self.target:
                raise InvalidDismantling(f"step {k}: removes target vertex {g.vertices[v]}")
            if not alive >> v & 1 or not alive >> w & 1 or v == w:
                raise InvalidDismantling(f"step {k}: {g.vertices[v]} -> {g.vertices[w]} not available")
            if g.masks[v] & alive & ~g.masks[w]:
                raise InvalidDismantling(
                    f"step {k}: {g.vertices[w]} does not dominate {g.vertices[v]}"
                )
            alive &= ~(1 << v)

    def is_valid(self) -> bool:
        try:
            self.validate()
        except InvalidDismantling:
            return False
        return True

    def format(self) -> str:
        g = self.base
        lines = [
            f"base: {g.n} vertices",
            "target: " + " ".join(g.vertices[i] for i in sorted(self.target)),
        ]
        lines += [f"{g.vertices[s.removed]} -> {g.vertices[s.into]}" for s in self.steps]
        return "\n".join(lines) + "\n"


def parse_dismantling(text: str, base: Graph) -> DismantlingSequence:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if len(lines) < 2 or not lines[0].startswith("base:") or not lines[1].startswith("target:"):
        raise ValueError("dismantling text must start with 'base:' and 'target:' lines")
    n = int(lines[0].split()[1])
    if n != base.n:
        raise ValueError(f"base has {base.n} vertices, text says {n}")
    target = frozenset(base.idx(t) for t in lines[1].split()[1:])
    steps = []
    for ln in lines[2:]:
        a, arrow, b = ln.partition(" -> ")
        if not arrow:
            raise ValueError(f"bad step line {ln!r}")
        steps.append(DismantlingStep(base.idx(a.strip()), base.idx(b.strip())))
    return DismantlingSequence(base, tuple(steps), target)


def _dominator_mask(g: Graph, v: int, alive: int) -> int:
    """Alive vertices other than ``v`` adjacent to every alive neighbour of ``v``."""
    cand = alive & ~(1 << v)
    for u in iter_bits(g.masks[v] & alive):
        cand &= g.masks[u]
        if not cand:
            break
    return cand


def dominating_vertices(g: Graph, v: int, alive: Iterable[int] | None = None) -> set[int]:
    """All ``v' != v`` with ``N(v) <= N(v')`` (within ``alive`` if given)."""
    if not 0 <= v < g.n:
        raise KeyError(f"unknown vertex index {v}")
    mask = (1 << g.n) - 1 if alive is None else sum(1 << i for i in set(alive))
    return set(iter_bits(_dominator_mask(g, v, mask)))


def _low(mask: int) -> int:
    return (mask & -mask).bit_length() - 1


def greedy_dismantle(
    g: Graph, target: Iterable[int], rank: Sequence[int] | None = None
) -> DismantlingSequence:
    """Repeatedly remove a dominated non-target vertex until none is left.

    Without ``rank`` the least dominated vertex goes first, into its least
    dominator.  With ``rank`` (e.g. distance to the target) the dominated
    vertex of highest rank goes first, into a dominator of lowest rank; ties
    fall back to vertex order.  Incomplete results carry the stuck retract
    as ``survivors``.
    """
    target = frozenset(target)
    if any(not 0 <= t < g.n for t in target):
        raise ValueError("target is not a subset of the vertex set")
    target_mask = sum(1 << t for t in target)
    if rank is None:
        key = lambda v: v  # noqa: E731
        pick = _low
    else:
        key = lambda v: (-rank[v], v)  # noqa: E731
        pick = lambda mask: min(iter_bits(mask), key=lambda w: (rank[w], w))  # noqa: E731
    alive = (1 << g.n) - 1
    heap = [key(v) for v in range(g.n) if v not in target and _dominator_mask(g, v, alive)]
    heapq.heapify(heap)
    steps = []
    while heap:
        item = heapq.heappop(heap)
        v = item if rank is None else item[1]
        if not alive >> v & 1:
            continue
        dom = _dominator_mask(g, v, alive)
        if not dom:
            continue
        steps.append(DismantlingStep(v, pick(dom)))
        # statuses can only change within distance two of v
        near = g.masks[v] & alive
        for u in iter_bits(near):
            near |= g.masks[u]
        alive &= ~(1 << v)
        near &= alive & ~target_mask
        if not g.masks[v] & alive:
            near = alive & ~target_mask
        for w in iter_bits(near):
            if _dominator_mask(g, w, alive):
                heapq.heappush(heap, key(w))
    return DismantlingSequence(g, tuple(steps), target)


def resolve_bipartite(seq: DismantlingSequence) -> DismantlingSequence:
    """Lift a dismantling of H to ``B(H) = K2 x H`` by pairing each step
    ``v -> v'`` with ``(0,v) -> (0,v')`` and ``(1,v) -> (1,v')``."""
    seq.validate()
    b = bipartite_resolution(seq.base)
    steps = []
    for s in seq.steps:
        steps.append(DismantlingStep(b.pair_index[(0, s.removed)], b.pair_index[(0, s.into)]))
        steps.append(DismantlingStep(b.pair_index[(1, s.removed)], b.pair_index[(1, s.into)]))
    target = frozenset(b.pair_index[(side, t)] for t in seq.target for side in (0, 1))
    out = DismantlingSequence(b, tuple(steps), target)
    out.validate()
    return out


def symmetric_shadow(seq: DismantlingSequence) -> DismantlingSequence:
    """Project a dismantling of ``B(H)`` to ``B(H')`` onto H, keeping the
    side-0 steps ``(0,v) -> (s,v')`` as ``v -> v'``."""
    b = seq.base
    if not isinstance(b, ProductGraph) or b.left.n != 2:
        raise ValueError("base is not a bipartite resolution")
    h = b.right
    inner = frozenset(b.pairs[t][1] for t in seq.target)
    expected = frozenset(b.pair_index[(side, t)] for t in inner for side in (0, 1))
    if seq.target != expected or not seq.complete:
        raise ValueError("sequence does not end at a full bipartite-resolution target")
    steps = tuple(
        DismantlingStep(b.pairs[s.removed][1], b.pairs[s.into][1])
        for s in seq.steps
        if b.pairs[s.removed][0] == 0
    )
    out = DismantlingSequence(h, steps, inner)
    out.validate()
    return out


def efficient_dismantle_diagonal(h: Graph, last: int | None = None) -> DismantlingSequence:
    """Dismantle the diagonal component of ``H x H`` to the diagonal, farthest
    vertices first, each into a dominator strictly closer to the diagonal.

    The result lives on ``square_with_diagonal(h).component``.  A dominator
    exactly one step closer is preferred.  ``last`` (a component index at
    distance 1) is deferred to the very end.  On failure ``stuck_at`` names
    the first vertex with no closer dominator and no fallback is attempted.
    """
    ds = square_with_diagonal(h)
    g = ds.component
    dist = ds.dist_to_diagonal
    target = ds.diagonal_component_indices
    if last is not None and dist[last] != 1:
        raise ValueError("deferred vertex must be at distance 1 from the diagonal")
    max_d = max(dist)
    closer = [0] * (max_d + 2)  # closer[k]: vertices at distance < k
    at = [0] * (max_d + 1)
    for c, d in enumerate(dist):
        at[d] |= 1 << c
    for k in range(1, max_d + 2):
        closer[k] = closer[k - 1] | at[k - 1]
    order = sorted((c for c in range(g.n) if dist[c] > 0), key=lambda c: (-dist[c], c))
    if last is not None:
        order.remove(last)
        order.append(last)
    alive = (1 << g.n) - 1
    steps = []
    for v in order:
        dom = _dominator_mask(g, v, alive)
        d = dist[v]
        best = dom & at[d - 1] or dom & closer[d]
        if not best:
            return DismantlingSequence(g, tuple(steps), target, stuck_at=v)
        steps.append(DismantlingStep(v, _low(best)))
        alive &= ~(1 << v)
    return DismantlingSequence(g, tuple(steps), target)


def composed_retraction(seq: DismantlingSequence) -> tuple[int, ...]:
    """Composite of all step retractions, as a map on ``seq.base``."""
    f = list(range(seq.base.n))
    for s in reversed(seq.steps):
        f[s.removed] = f[s.into]
    return tuple(f)

