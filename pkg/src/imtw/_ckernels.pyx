# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the bitset kernels in ``_purekernels``.

Masks are 64-bit words, so callers must route graphs with more than 64
vertices (or more than 64 candidate edges) to the pure-Python versions.
"""

from libc.stdlib cimport malloc, free
from libc.stdint cimport uint64_t, int32_t, uint8_t

BACKEND = "cython"


cdef extern from *:
    int __builtin_ctzll(unsigned long long) nogil
    int __builtin_popcountll(unsigned long long) nogil


cdef inline int lowbit_index(uint64_t x) nogil:
    return __builtin_ctzll(x)


cdef inline int bitcount(uint64_t x) nogil:
    return __builtin_popcountll(x)


def maximal_independent_sets(adj, vertices, cap):
    cdef uint64_t verts = vertices
    cdef uint64_t cn[64]
    cdef uint64_t m, low, r, p, x, cand
    cdef int v, u, best_u, best_c, c
    cdef long limit = cap
    out = []
    if verts == 0:
        return [0]
    m = verts
    while m:
        low = m & (~m + 1)
        v = lowbit_index(low)
        cn[v] = verts & ~(<uint64_t>adj[v]) & ~low
        m ^= low

    # explicit stack of (r, p, x) triples
    cdef int cap_stack = 64 * 65 + 8
    cdef uint64_t *stack = <uint64_t *> malloc(3 * cap_stack * sizeof(uint64_t))
    cdef int top = 0
    stack[0] = 0
    stack[1] = verts
    stack[2] = 0
    top = 1
    try:
        while top > 0:
            top -= 1
            r = stack[3 * top]
            p = stack[3 * top + 1]
            x = stack[3 * top + 2]
            if p == 0:
                if x == 0:
                    out.append(r)
                    if len(out) > limit:
                        return None
                continue
            best_u = -1
            best_c = -1
            m = p | x
            while m:
                low = m & (~m + 1)
                u = lowbit_index(low)
                c = bitcount(p & cn[u])
                if c > best_c:
                    best_u = u
                    best_c = c
                m ^= low
            cand = p & ~cn[best_u]
            while cand:
                low = cand & (~cand + 1)
                v = lowbit_index(low)
                stack[3 * top] = r | low
                stack[3 * top + 1] = p & cn[v]
                stack[3 * top + 2] = x & cn[v]
                top += 1
                p &= ~low
                x |= low
                cand ^= low
    finally:
        free(stack)
    return out


cdef int _best_size
cdef uint64_t _best_mask


cdef void _search(uint64_t *conflict, uint64_t avail, uint64_t chosen, int size) nogil:
    global _best_size, _best_mask
    cdef uint64_t low, rest
    cdef int i
    if size + bitcount(avail) <= _best_size:
        return
    if avail == 0:
        _best_size = size
        _best_mask = chosen
        return
    low = avail & (~avail + 1)
    i = lowbit_index(low)
    rest = avail ^ low
    _search(conflict, rest & ~conflict[i], chosen | low, size + 1)
    if conflict[i] & rest:
        _search(conflict, rest, chosen, size)


def max_induced_subset(adj, edges):
    global _best_size, _best_mask
    cdef int m = len(edges)
    cdef uint64_t conflict[64]
    cdef uint64_t closed[64]
    cdef int ea[64]
    cdef int eb[64]
    cdef int i, j
    cdef uint64_t c, ci
    if m == 0:
        return []
    for i in range(m):
        ea[i] = edges[i][0]
        eb[i] = edges[i][1]
        closed[i] = (<uint64_t>adj[ea[i]]) | (<uint64_t>adj[eb[i]]) | ((<uint64_t>1) << ea[i]) | ((<uint64_t>1) << eb[i])
    for i in range(m):
        ci = closed[i]
        c = 0
        for j in range(m):
            if j != i and (((ci >> ea[j]) & 1) or ((ci >> eb[j]) & 1)):
                c |= (<uint64_t>1) << j
        conflict[i] = c
    _best_size = 0
    _best_mask = 0
    cdef uint64_t full = ((<uint64_t>1) << m) - 1 if m < 64 else <uint64_t>0xFFFFFFFFFFFFFFFF
    _search(conflict, full, 0, 0)
    return [i for i in range(m) if (_best_mask >> i) & 1]


def elimination_dp(ladj, costs):
    cdef int m = len(ladj)
    cdef uint64_t la[64]
    cdef int i
    for i in range(m):
        la[i] = ladj[i]
    cdef uint64_t size = (<uint64_t>1) << m
    cdef int32_t *value = <int32_t *> malloc(size * sizeof(int32_t))
    cdef uint8_t *choice = <uint8_t *> malloc(size * sizeof(uint8_t))
    cdef int32_t *ctab = NULL
    cdef bint use_costs = costs is not None
    cdef uint64_t s, t, low, rest, comp, frontier, f, nb, q, c, bag
    cdef int v, bestc
    cdef int32_t bestv, prev, cost, cur
    cdef bint have
    if use_costs:
        ctab = <int32_t *> malloc(size * sizeof(int32_t))
        for s in range(size):
            ctab[s] = costs[s]
    try:
        with nogil:
            value[0] = -1
            choice[0] = 0
            for s in range(1, size):
                have = False
                bestv = 0
                bestc = 0
                t = s
                while t:
                    low = t & (~t + 1)
                    v = lowbit_index(low)
                    t ^= low
                    rest = s ^ low
                    prev = value[rest]
                    if have and prev >= bestv:
                        continue
                    comp = low
                    frontier = low
                    while frontier:
                        f = frontier & (~frontier + 1)
                        frontier ^= f
                        nb = la[lowbit_index(f)] & rest & ~comp
                        comp |= nb
                        frontier |= nb
                    q = 0
                    c = comp
                    while c:
                        f = c & (~c + 1)
                        c ^= f
                        q |= la[lowbit_index(f)]
                    q &= ~rest & ~low
                    bag = q | low
                    if use_costs:
                        cost = ctab[bag]
                    else:
                        cost = bitcount(bag) - 1
                    cur = prev if prev > cost else cost
                    if not have or cur < bestv:
                        have = True
                        bestv = cur
                        bestc = v
                value[s] = bestv
                choice[s] = bestc
        order = []
        s = size - 1
        while s:
            v = choice[s]
            order.append(v)
            s &= ~((<uint64_t>1) << v)
        order.reverse()
        result = value[size - 1]
    finally:
        free(value)
        free(choice)
        if ctab != NULL:
            free(ctab)
    return result, order
