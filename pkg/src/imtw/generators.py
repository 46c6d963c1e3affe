"""Seeded random instances for tests, selfcheck and benchmarks."""

import random
from fractions import Fraction

from .bits import iter_members
from .graph import Graph, VertexWeights
from .treedec import TreeDecomposition, td_from_order

EDGE_PROBS = (0.2, 0.4, 0.6)


def rng_for(seed):
    return seed if isinstance(seed, random.Random) else random.Random(seed)


def random_graph(rng, n, p):
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
    return Graph(n, edges)


def random_weights(rng, n, lo=-5, hi=5, denominators=(1, 2, 3, 4)):
    """Exact rationals in [lo, hi]."""
    out = []
    for _ in range(n):
        d = rng.choice(denominators)
        out.append(Fraction(rng.randint(lo * d, hi * d), d))
    return VertexWeights(out)


def random_instance(rng, n_max=10, n_min=1, probs=EDGE_PROBS):
    n = rng.randint(n_min, n_max)
    G = random_graph(rng, n, rng.choice(probs))
    return G, random_weights(rng, n)


def random_order(rng, G):
    order = list(range(G.n))
    rng.shuffle(order)
    return order


def random_decomposition(rng, G, pad=0.0):
    """A valid decomposition from a random elimination order.

    With ``pad`` > 0 each bag also receives random extra vertices that are
    already present in a neighboring bag, and some bags are duplicated onto
    new leaves, so shapes vary beyond elimination decompositions.
    """
    T = td_from_order(G, random_order(rng, G))
    if pad <= 0:
        return T
    bags = list(T.bags)
    edges = list(T.edges)
    for a, b in list(edges):
        if rng.random() < pad:
            grow = bags[b] & ~bags[a]
            if grow:
                pick = [v for v in range(G.n) if (grow >> v) & 1]
                bags[a] |= 1 << rng.choice(pick)
    T2 = _repair(TreeDecomposition(bags, edges))
    bags, edges = list(T2.bags), list(T2.edges)
    for t in range(len(T2.bags)):
        if rng.random() < pad:
            new = len(bags)
            bags.append(bags[t] & rng.getrandbits(max(G.n, 1)))
            edges.append((t, new))
    return TreeDecomposition(bags, edges)


def _repair(T):
    """Add each vertex along the tree paths between its occurrences."""
    parent, children, order = T.rooted(0)
    bags = list(T.bags)
    # a tree edge lies on the path of v iff v occurs on both of its sides
    counts = {}
    for b in bags:
        for v in iter_members(b):
            counts[v] = counts.get(v, 0) + 1
    add = [0] * len(bags)
    for t in order[1:]:
        sub_only = _subtree_counts(bags, children, t)
        for v, c in sub_only.items():
            if 0 < c < counts[v]:
                add[t] |= 1 << v
                add[parent[t]] |= 1 << v
    return TreeDecomposition([b | a for b, a in zip(bags, add)], T.edges)


def _subtree_counts(bags, children, t):
    out = {}
    stack = [t]
    while stack:
        s = stack.pop()
        b = bags[s]
        for v in iter_members(b):
            out[v] = out.get(v, 0) + 1
        stack.extend(children[s])
    return out


def independent_seeds(seed, count):
    rng = random.Random(seed)
    return [rng.getrandbits(32) for _ in range(count)]
