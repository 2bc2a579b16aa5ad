"""Pure-Python homomorphism CSP kernel.

Domains are Python ``int`` bitmasks over the target graph's vertex indices,
so the target may have any number of vertices.  The compiled kernel in
``_ckernel.pyx`` exposes the same class for targets with at most 64 vertices.
"""

from __future__ import annotations

from typing import Iterator, Sequence

BACKEND = "python"


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class HomCSP:
    """Hom(G, H) as a binary CSP: one variable per G-vertex, values in V(H).

    ``var_nbrs[x]`` lists the G-neighbours of ``x`` other than ``x`` itself;
    a G-loop is given by ``var_looped[x]`` and restricts ``x`` to looped
    H-vertices.  Every G-edge carries the same relation, H-adjacency, so the
    supports of a domain are the union of the neighbourhood masks of its
    values.
    """

    def __init__(
        self,
        var_nbrs: Sequence[Sequence[int]],
        var_looped: Sequence[bool],
        h_nbr_masks: Sequence[int],
        h_loop_mask: int,
    ) -> None:
        self.n_vars = len(var_nbrs)
        self.var_nbrs = [tuple(nb) for nb in var_nbrs]
        self.var_looped = [bool(x) for x in var_looped]
        self.h_nbr_masks = list(h_nbr_masks)
        self.h_loop_mask = h_loop_mask
        self.full_mask = (1 << len(self.h_nbr_masks)) - 1
        self.nodes = 0
        self._support: dict[int, int] = {}

    def initial_domains(self) -> list[int]:
        return [
            (self.h_loop_mask if looped else self.full_mask)
            for looped in self.var_looped
        ]

    def support(self, mask: int) -> int:
        cached = self._support.get(mask)
        if cached is None:
            cached = 0
            nbr = self.h_nbr_masks
            for b in _bits(mask):
                cached |= nbr[b]
            self._support[mask] = cached
        return cached

    def propagate(self, domains: list[int], changed: Sequence[int] | None = None) -> bool:
        """Reduce ``domains`` in place to the arc-consistent fixpoint.

        Returns False as soon as some domain becomes empty.
        """
        for looped_var in range(self.n_vars):
            if self.var_looped[looped_var]:
                domains[looped_var] &= self.h_loop_mask
        if any(d == 0 for d in domains):
            return False
        queue = list(range(self.n_vars)) if changed is None else list(changed)
        queued = [False] * self.n_vars
        for x in queue:
            queued[x] = True
        support = self.support
        nbrs = self.var_nbrs
        while queue:
            x = queue.pop()
            queued[x] = False
            sup = support(domains[x])
            for y in nbrs[x]:
                dy = domains[y]
                new = dy & sup
                if new != dy:
                    if not new:
                        return False
                    domains[y] = new
                    if not queued[y]:
                        queued[y] = True
                        queue.append(y)
        return True

    def _pick(self, domains: list[int], order: str) -> int:
        if order == "lex":
            for x, d in enumerate(domains):
                if d & (d - 1):
                    return x
            return -1
        best, best_size = -1, 0
        for x, d in enumerate(domains):
            if d & (d - 1):
                size = d.bit_count()
                if best < 0 or size < best_size:
                    best, best_size = x, size
        return best

    def first_solution(self, domains: Sequence[int], order: str = "mrv") -> list[int] | None:
        """First solution in ascending value order, or None after exhaustive search."""
        doms = list(domains)
        if not self.propagate(doms):
            return None
        return self._search(doms, order)

    def _search(self, domains: list[int], order: str) -> list[int] | None:
        self.nodes += 1
        x = self._pick(domains, order)
        if x < 0:
            return [d.bit_length() - 1 for d in domains]
        for value in _bits(domains[x]):
            child = domains.copy()
            child[x] = 1 << value
            if self.propagate(child, (x,)):
                found = self._search(child, order)
                if found is not None:
                    return found
        return None

    def solutions(self, domains: Sequence[int]) -> Iterator[list[int]]:
        """All solutions, lexicographic in variable index order."""
        doms = list(domains)
        if not self.propagate(doms):
            return
        stack = [doms]
        # explicit stack keeps lexicographic order: children pushed in reverse
        while stack:
            current = stack.pop()
            self.nodes += 1
            x = self._pick(current, "lex")
            if x < 0:
                yield [d.bit_length() - 1 for d in current]
                continue
            children = []
            for value in _bits(current[x]):
                child = current.copy()
                child[x] = 1 << value
                if self.propagate(child, (x,)):
                    children.append(child)
            stack.extend(reversed(children))
