# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled homomorphism CSP kernel (targets with at most 64 vertices).

Same interface as ``_pykernel.HomCSP``; domains are ``uint64`` masks held
in C arrays, and search runs on an explicit stack of domain frames.
"""

from libc.stdint cimport uint64_t
from libc.stdlib cimport malloc, free, realloc
from libc.string cimport memcpy

BACKEND = "cython"


cdef inline int _popcount(uint64_t x) nogil:
    return __builtin_popcountll(x)


cdef inline int _ctz(uint64_t x) nogil:
    return __builtin_ctzll(x)


cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil
    int __builtin_ctzll(unsigned long long) nogil


cdef class HomCSP:
    cdef public int n_vars
    cdef public long long nodes
    cdef int n_h
    cdef uint64_t full
    cdef uint64_t loop_mask
    cdef uint64_t h_masks[64]
    cdef int *nbr_start
    cdef int *nbr_list
    cdef char *looped
    cdef int *queue
    cdef char *queued

    def __cinit__(self, var_nbrs, var_looped, h_nbr_masks, h_loop_mask):
        cdef int i, k, total
        self.n_h = len(h_nbr_masks)
        if self.n_h > 64:
            raise ValueError("compiled kernel supports at most 64 target vertices")
        self.n_vars = len(var_nbrs)
        self.nodes = 0
        self.full = (<uint64_t>0xFFFFFFFFFFFFFFFF) if self.n_h == 64 else ((<uint64_t>1 << self.n_h) - 1)
        self.loop_mask = <uint64_t>h_loop_mask
        for i in range(self.n_h):
            self.h_masks[i] = <uint64_t>h_nbr_masks[i]
        total = 0
        for nb in var_nbrs:
            total += len(nb)
        self.nbr_start = <int *>malloc((self.n_vars + 1) * sizeof(int))
        self.nbr_list = <int *>malloc((total + 1) * sizeof(int))
        self.looped = <char *>malloc((self.n_vars + 1) * sizeof(char))
        self.queue = <int *>malloc((self.n_vars + 1) * sizeof(int))
        self.queued = <char *>malloc((self.n_vars + 1) * sizeof(char))
        if not (self.nbr_start and self.nbr_list and self.looped and self.queue and self.queued):
            raise MemoryError()
        k = 0
        for i in range(self.n_vars):
            self.nbr_start[i] = k
            for y in var_nbrs[i]:
                self.nbr_list[k] = y
                k += 1
            self.looped[i] = 1 if var_looped[i] else 0
        self.nbr_start[self.n_vars] = k

    def __dealloc__(self):
        free(self.nbr_start)
        free(self.nbr_list)
        free(self.looped)
        free(self.queue)
        free(self.queued)

    @property
    def full_mask(self):
        return self.full

    def initial_domains(self):
        return [self.loop_mask if self.looped[i] else self.full for i in range(self.n_vars)]

    cdef inline uint64_t _support(self, uint64_t mask) nogil:
        cdef uint64_t out = 0
        while mask:
            out |= self.h_masks[_ctz(mask)]
            mask &= mask - 1
        return out

    def support(self, mask):
        return self._support(<uint64_t>mask)

    cdef bint _propagate(self, uint64_t *dom, int start) nogil:
        # start < 0: every variable is initially queued
        return self._propagate_from(dom, &start, 0 if start < 0 else 1, start < 0)

    cdef bint _propagate_from(self, uint64_t *dom, int *starts, int n_starts, bint everything) nogil:
        cdef int head = 0, tail = 0, x, y, k, n = self.n_vars
        cdef uint64_t sup, dy, new
        for x in range(n):
            if self.looped[x]:
                dom[x] &= self.loop_mask
            if dom[x] == 0:
                return False
            self.queued[x] = 0
        if everything:
            for x in range(n):
                self.queue[tail] = x
                tail += 1
                self.queued[x] = 1
        else:
            for k in range(n_starts):
                x = starts[k]
                if not self.queued[x]:
                    self.queued[x] = 1
                    self.queue[tail] = x
                    tail += 1
        # circular queue of capacity n + 1
        while head != tail:
            x = self.queue[head]
            head += 1
            if head == n + 1:
                head = 0
            self.queued[x] = 0
            sup = self._support(dom[x])
            for k in range(self.nbr_start[x], self.nbr_start[x + 1]):
                y = self.nbr_list[k]
                dy = dom[y]
                new = dy & sup
                if new != dy:
                    if new == 0:
                        return False
                    dom[y] = new
                    if not self.queued[y]:
                        self.queued[y] = 1
                        self.queue[tail] = y
                        tail += 1
                        if tail == n + 1:
                            tail = 0
        return True

    def propagate(self, domains, changed=None):
        """Reduce ``domains`` (a list) in place to the arc-consistent fixpoint."""
        cdef int n = self.n_vars, i
        cdef uint64_t *buf = <uint64_t *>malloc((n + 1) * sizeof(uint64_t))
        cdef bint ok = True
        cdef int *sbuf
        if not buf:
            raise MemoryError()
        try:
            for i in range(n):
                buf[i] = <uint64_t>domains[i]
            if changed is None:
                ok = self._propagate(buf, -1)
            else:
                starts = list(changed)
                sbuf = <int *>malloc((len(starts) + 1) * sizeof(int))
                if not sbuf:
                    raise MemoryError()
                for i, x in enumerate(starts):
                    sbuf[i] = x
                ok = self._propagate_from(buf, sbuf, len(starts), False)
                free(sbuf)
            for i in range(n):
                domains[i] = buf[i]
        finally:
            free(buf)
        return ok

    cdef int _pick(self, uint64_t *dom, bint lex) nogil:
        cdef int x, best = -1, best_size = 65, size
        for x in range(self.n_vars):
            if dom[x] & (dom[x] - 1):
                if lex:
                    return x
                size = _popcount(dom[x])
                if size < best_size:
                    best, best_size = x, size
        return best

    cdef object _run(self, domains, bint lex, bint collect_all):
        """Depth-first search over frames; returns a list of solutions."""
        cdef int n = self.n_vars, depth = 0, cap = 64, x, i
        cdef uint64_t *frames
        cdef uint64_t *cur
        cdef uint64_t *child
        cdef uint64_t *remaining  # untried values per depth
        cdef int *var_at
        cdef uint64_t value
        out = []
        frames = <uint64_t *>malloc(cap * (n + 1) * sizeof(uint64_t))
        remaining = <uint64_t *>malloc(cap * sizeof(uint64_t))
        var_at = <int *>malloc(cap * sizeof(int))
        if not frames or not remaining or not var_at:
            free(frames); free(remaining); free(var_at)
            raise MemoryError()
        try:
            for i in range(n):
                frames[i] = <uint64_t>domains[i]
            if not self._propagate(frames, -1):
                return out
            self.nodes += 1
            x = self._pick(frames, lex)
            if x < 0:
                out.append([_ctz(frames[i]) for i in range(n)])
                return out
            var_at[0] = x
            remaining[0] = frames[x]
            while depth >= 0:
                if remaining[depth] == 0:
                    depth -= 1
                    continue
                value = remaining[depth] & (~remaining[depth] + 1)
                remaining[depth] &= remaining[depth] - 1
                if depth + 1 >= cap:
                    cap *= 2
                    frames = <uint64_t *>realloc(frames, cap * (n + 1) * sizeof(uint64_t))
                    remaining = <uint64_t *>realloc(remaining, cap * sizeof(uint64_t))
                    var_at = <int *>realloc(var_at, cap * sizeof(int))
                    if not frames or not remaining or not var_at:
                        raise MemoryError()
                cur = frames + depth * (n + 1)
                child = frames + (depth + 1) * (n + 1)
                memcpy(child, cur, n * sizeof(uint64_t))
                child[var_at[depth]] = value
                if not self._propagate(child, var_at[depth]):
                    continue
                self.nodes += 1
                x = self._pick(child, lex)
                if x < 0:
                    out.append([_ctz(child[i]) for i in range(n)])
                    if not collect_all:
                        return out
                    continue
                depth += 1
                var_at[depth] = x
                remaining[depth] = child[x]
            return out
        finally:
            free(frames)
            free(remaining)
            free(var_at)

    def first_solution(self, domains, order="mrv"):
        found = self._run(domains, order == "lex", False)
        return found[0] if found else None

    def solutions(self, domains):
        """All solutions, lexicographic in variable index order."""
        yield from self._run(domains, True, True)
