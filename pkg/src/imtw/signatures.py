"""Candidate families for the intersection of the optimal solution with a bag.

For a bag B the family is built from triples (C, S, D): S ranges over the
projections onto B of the maximal independent sets of G, C is a small set
covering the solution edges at B, and D is a small set whose neighborhood
removes vertices of S. The vertices of S left open by (C, D) are grouped by
type (weight sign, neighbors in C, automaton state of the two-bag
neighborhood decomposition) and each group contributes a suffix of its
(weight, vertex order) sorting.

``enumerate_bag_family`` is the fast enumerator used by the solver.
``enumerate_bag_family_reference`` iterates over every C and D literally and
exists to test the fast one.
"""

from dataclasses import dataclass
from itertools import combinations

from .automata import neighborhood_state
from .bits import iter_members, members, popcount, subsets_upto
from .errors import ContractError, InvariantError, ResourceLimitError
from .graph import (induced_subgraph, is_independent_set, maximal_independent_sets,
                    treewidth_exact)

FAMILY_CAP = 500_000
BOUNDED = "bounded"
ALL = "all"


@dataclass(frozen=True)
class BasicSignature:
    C: int
    S: int
    D: int
    B: int


def cover_bound(k, w):
    return 2 * k * (w + 1)


def kill_bound(k, w):
    return k * (w + 1)


def mis_projections(G, B, mis=None):
    """Distinct intersections of B with the maximal independent sets of G, sorted."""
    if mis is None:
        mis = maximal_independent_sets(G)
    return sorted({I & B for I in mis})


def dangling_vertices(sig, G):
    return sig.S & ~(G.neighborhood(sig.D) | sig.C)


def _order_key(weights, v):
    return (weights[v], weights.rank[v])


def dangling_type(G, weights, A, v, C, with_state=True):
    trace = G.adj[v] & C
    sign = "neg" if weights[v] < 0 else "nonneg"
    if not with_state:
        return (sign, trace)
    return (sign, trace, A.encode(neighborhood_state(A, G, v, trace)))


def classify_dangling(G, U, C, A, weights, with_state=True):
    """Partition U by type; each group is sorted ascending by (weight, vertex order)."""
    groups = {}
    for v in iter_members(U):
        groups.setdefault(dangling_type(G, weights, A, v, C, with_state), []).append(v)
    out = []
    for key in sorted(groups, key=repr):
        out.append(sorted(groups[key], key=lambda v: _order_key(weights, v)))
    return out


def suffix_family(group, qbound, w, mode=BOUNDED):
    """Suffixes of the sorted group allowed by the size windows (all of them in mode ``all``)."""
    n = len(group)
    out = []
    mask = 0
    lengths = []
    for length in range(n + 1):
        if mode == ALL or length <= max(qbound, w + 1) or length >= n - qbound:
            lengths.append(length)
    want = set(lengths)
    if 0 in want:
        out.append(0)
    for i, v in enumerate(reversed(group)):
        mask |= 1 << v
        if i + 1 in want:
            out.append(mask)
    return out


def _suffix_masks(groups, qbound, w, mode):
    sels = {0}
    for g in groups:
        opts = suffix_family(g, qbound, w, mode)
        sels = {a | b for a in sels for b in opts}
    return sels


def _killed(G, S, D):
    return S & G.neighborhood(D)


def _minimal_kills(G, S, dbound):
    """Map K -> sets D (|D| <= dbound) with S & N(D) == K, none shrinkable by one vertex.

    Only vertices of S or next to S can change K. Any D reaching K shrinks,
    one vertex at a time, to a kept D' with the same K, and D' avoids every
    set D avoids, so the kept lists decide feasibility exactly.
    """
    pool = G.neighborhood(S) | S
    out = {0: [0]}
    for D in subsets_upto(pool, dbound):
        if not D:
            continue
        K = _killed(G, S, D)
        if all(_killed(G, S, D & ~(1 << d)) != K for d in iter_members(D)):
            out.setdefault(K, []).append(D)
    return out


class _Context:
    """Per-call memo of the checks shared by both enumerators."""

    def __init__(self, G, weights, A, w, mode, prune):
        self.G = G
        self.weights = weights
        self.A = A
        self.w = w
        self.mode = mode
        self.prune = prune
        self.tw_ok = {}
        self.state = {}

    def small_tw(self, Y):
        ok = self.tw_ok.get(Y)
        if ok is None:
            if self.w == 0:
                ok = is_independent_set(self.G, Y)
            else:
                ok = treewidth_exact(induced_subgraph(self.G, Y)) <= self.w
            self.tw_ok[Y] = ok
        return ok

    def groups(self, U, C):
        G, weights = self.G, self.weights
        typed = {}
        for v in iter_members(U):
            trace = G.adj[v] & C
            sign = weights[v] < 0
            if self.mode == ALL:
                key = (sign, trace)
            else:
                sk = (v, trace)
                q = self.state.get(sk)
                if q is None:
                    q = self.A.encode(neighborhood_state(self.A, G, v, trace))
                    self.state[sk] = q
                key = (sign, trace, q)
            typed.setdefault(key, []).append(v)
        return [sorted(g, key=lambda v: _order_key(weights, v)) for g in typed.values()]

    def add(self, family, CB, U, C, qbound):
        for sel in _suffix_masks(self.groups(U, C), qbound, self.w, self.mode):
            Y = CB | sel
            if Y not in family and (not self.prune or self.small_tw(Y)):
                family.add(Y)
                if len(family) > FAMILY_CAP:
                    raise ResourceLimitError(f"bag family exceeds {FAMILY_CAP} sets")


def _resolve(A, k, w, mode):
    if mode not in (BOUNDED, ALL):
        raise ContractError(f"unknown family mode {mode!r}")
    qbound = None
    if mode == BOUNDED:
        qbound = A.state_bound(max(cover_bound(k, w), w))
        if qbound is None:
            mode = ALL
    return mode, qbound or 0


def enumerate_bag_family(G, weights, B, k, w, A, mode=BOUNDED, mis=None, prune=True):
    """Sorted candidate subsets of B containing X* & B for the optimal solution X*.

    ``mode="bounded"`` keeps only the suffix lengths allowed by the automaton's
    state bound; without a declared bound it falls back to ``"all"``, which
    keeps every suffix and groups by sign and trace only. With ``prune`` a
    candidate is kept only if it induces treewidth at most w, which every
    subset of a solution does.
    """
    mode, qbound = _resolve(A, k, w, mode)
    ctx = _Context(G, weights, A, w, mode, prune)
    cbound, dbound = cover_bound(k, w), kill_bound(k, w)
    family = set()
    seen = set()
    for S in mis_projections(G, B, mis):
        kills = _minimal_kills(G, S, dbound)
        for CB in subsets_upto(B, cbound):
            if prune and not ctx.small_tw(CB):
                continue
            room = cbound - popcount(CB)
            for K, Ds in kills.items():
                Ds = [D for D in Ds if not D & CB]
                if not Ds:
                    continue
                U = S & ~K & ~CB
                outside = G.neighborhood(U) & ~B
                for CO in _outside_choices(outside, Ds, room, mode):
                    key = (CB, U, G.neighborhood(U) & CO)
                    if key in seen:
                        continue
                    seen.add(key)
                    ctx.add(family, CB, U, CB | CO, qbound)
    return sorted(family)


def _outside_choices(outside, Ds, room, mode):
    """Sets of cover vertices outside B worth trying for one (S, C & B, K).

    A finer grouping only adds suffix combinations in mode ``all``, so the
    maximal admissible choices suffice there; mode ``bounded`` needs them all.
    """
    if mode == ALL:
        out = set()
        for D in Ds:
            avail = outside & ~D
            if popcount(avail) <= room:
                out.add(avail)
            else:
                for combo in combinations(members(avail), room):
                    m = 0
                    for v in combo:
                        m |= 1 << v
                    out.add(m)
        return out
    out = []
    for CO in subsets_upto(outside, room):
        if any(not D & CO for D in Ds):
            out.append(CO)
    return out


def enumerate_bag_family_reference(G, weights, B, k, w, A, mode=BOUNDED, mis=None, prune=True):
    """Literal enumeration over every S, every C and every D disjoint from C."""
    mode, qbound = _resolve(A, k, w, mode)
    ctx = _Context(G, weights, A, w, mode, prune)
    cbound, dbound = cover_bound(k, w), kill_bound(k, w)
    family = set()
    verts = G.vertices
    Cs = subsets_upto(verts, cbound)
    Ds = subsets_upto(verts, dbound)
    for S in mis_projections(G, B, mis):
        for C in Cs:
            for D in Ds:
                if D & C:
                    continue
                sig = BasicSignature(C, S, D, B)
                ctx.add(family, C & B, dangling_vertices(sig, G), C, qbound)
    return sorted(family)


# ------------------------------------------------------------ signatures of X

def _min_vertex_cover(edges, pool):
    for size in range(popcount(pool) + 1):
        for cand in combinations(members(pool), size):
            m = 0
            for v in cand:
                m |= 1 << v
            if all((m >> u) & 1 or (m >> v) & 1 for u, v in edges):
                return m
    raise InvariantError("no vertex cover found")


def construct_signature_for(G, X, B, k, w):
    """A basic B-signature of X with its size bounds checked."""
    edges = [(u, v) for u, v in G.edges_within(X) if ((B >> u) | (B >> v)) & 1]
    pool = 0
    for u, v in edges:
        pool |= (1 << u) | (1 << v)
    C = _min_vertex_cover(edges, pool)
    if popcount(C) > cover_bound(k, w):
        raise InvariantError(f"cover of size {popcount(C)} exceeds {cover_bound(k, w)}")
    S = (X & B) & ~C
    for v in iter_members(B):
        if not (S >> v) & 1 and not G.adj[v] & S:
            S |= 1 << v
    rest = X & ~C
    need = (S & ~C) & G.neighborhood(rest)
    D = rest
    for v in iter_members(rest):
        trial = D & ~(1 << v)
        if need & ~G.neighborhood(trial) == 0:
            D = trial
    if popcount(D) > kill_bound(k, w):
        raise InvariantError(f"kill set of size {popcount(D)} exceeds {kill_bound(k, w)}")
    return BasicSignature(C, S, D, B)


def check_signature(G, X, sig, mis=None):
    """List of violated signature conditions (empty when valid)."""
    bad = []
    C, S, D, B = sig.C, sig.S, sig.D, sig.B
    if C & ~X:
        bad.append("cover-outside-solution")
    for u, v in G.edges_within(X):
        if ((B >> u) | (B >> v)) & 1 and not ((C >> u) | (C >> v)) & 1:
            bad.append(f"uncovered-edge {u}-{v}")
    if ((X & B) & ~C) & ~S:
        bad.append("solution-not-in-S")
    if S not in set(mis_projections(G, B, mis)):
        bad.append("S-not-projection")
    if D & ~(X & ~C):
        bad.append("kill-set-outside")
    if ((S & ~C) & G.neighborhood(X & ~C)) & ~G.neighborhood(D):
        bad.append("kill-set-short")
    return bad


def suffix_state_count(A, G, v, trace):
    """Distinct states along the chain that hangs m same-type vertices under ``trace``.

    The chain starts from the leaf state of ``trace`` and joins one copy of the
    neighborhood state of v per step; the sequence is eventually periodic and
    the count of its distinct values bounds both the tail and the period.
    """
    q_leaf = A.leaf(G, trace)
    q_v = neighborhood_state(A, G, v, trace)
    seen = set()
    q = q_leaf
    while True:
        key = A.encode(q)
        if key in seen:
            return len(seen)
        seen.add(key)
        q = A.join(G, q_v, q, trace, trace, trace)
