"""Graphs, vertex weights, the lexicographic set order, and small exact primitives.

Vertices are the integers ``0..n-1`` and vertex sets are int bitmasks (see
``bits``). A graph may be restricted to a vertex subset: ``induced_subgraph``
keeps the original ids and only masks out the other vertices, so sets taken
from different subgraphs can be compared directly.
"""

from fractions import Fraction
from itertools import combinations

from . import kernels
from .bits import iter_members, members, popcount
from .errors import ContractError, ResourceLimitError

TREEWIDTH_MAX_N = 20
MU_MAX_EDGES = 200
MIS_CAP = 200_000


class Graph:
    """Simple undirected graph on ``0..n-1``, optionally restricted to ``vertices``."""

    __slots__ = ("n", "adj", "vertices", "_edges")

    def __init__(self, n, edges=(), vertices=None):
        if n < 0:
            raise ContractError("negative vertex count")
        full = (1 << n) - 1
        if vertices is None:
            vertices = full
        elif vertices & ~full:
            raise ContractError("vertex mask outside 0..n-1")
        adj = [0] * n
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ContractError(f"edge ({u},{v}) out of range for n={n}")
            if u == v:
                raise ContractError(f"self-loop at {u}")
            if (adj[u] >> v) & 1:
                raise ContractError(f"parallel edge ({u},{v})")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        for v in range(n):
            if (vertices >> v) & 1:
                adj[v] &= vertices
            else:
                adj[v] = 0
        self.n = n
        self.adj = tuple(adj)
        self.vertices = vertices
        self._edges = None

    @classmethod
    def from_adjacency(cls, adj, vertices=None):
        g = cls.__new__(cls)
        n = len(adj)
        g.n = n
        g.vertices = (1 << n) - 1 if vertices is None else vertices
        g.adj = tuple(a & g.vertices if (g.vertices >> v) & 1 else 0 for v, a in enumerate(adj))
        g._edges = None
        return g

    @property
    def edges(self):
        """Sorted list of edges ``(u, v)`` with ``u < v``."""
        if self._edges is None:
            out = []
            for u in iter_members(self.vertices):
                for v in iter_members(self.adj[u] >> (u + 1) << (u + 1)):
                    out.append((u, v))
            self._edges = out
        return self._edges

    @property
    def m(self):
        return len(self.edges)

    def neighbors(self, v):
        return self.adj[v]

    def neighborhood(self, mask):
        """Open neighborhood N(mask): vertices outside mask adjacent to it."""
        out = 0
        for v in iter_members(mask):
            out |= self.adj[v]
        return out & ~mask

    def has_edge(self, u, v):
        return bool((self.adj[u] >> v) & 1)

    def degree(self, v):
        return popcount(self.adj[v])

    def edges_within(self, mask):
        return [(u, v) for u, v in self.edges if (mask >> u) & 1 and (mask >> v) & 1]

    def __eq__(self, other):
        return isinstance(other, Graph) and (self.n, self.adj, self.vertices) == (other.n, other.adj, other.vertices)

    def __hash__(self):
        return hash((self.n, self.adj, self.vertices))

    def __repr__(self):
        return f"Graph(n={self.n}, edges={self.edges})"


def check_set(G, X):
    if X < 0 or X & ~G.vertices:
        raise ContractError(f"vertex set {members(X)} is not inside the graph's vertex set")


def induced_subgraph(G, X):
    """G[X] with original vertex ids kept; vertices outside X become absent."""
    check_set(G, X)
    return Graph.from_adjacency(G.adj, X)


def is_independent_set(G, X):
    check_set(G, X)
    for v in iter_members(X):
        if G.adj[v] & X:
            return False
    return True


def maximal_independent_sets(G, cap=MIS_CAP):
    """All inclusion-maximal independent sets of G, sorted ascending as masks."""
    out = kernels.maximal_independent_sets(G.adj, G.vertices, cap)
    if out is None:
        raise ResourceLimitError(f"more than {cap} maximal independent sets")
    return sorted(out)


def is_matching(M):
    seen = 0
    for u, v in M:
        b = (1 << u) | (1 << v)
        if seen & b or u == v:
            return False
        seen |= b
    return True


def is_induced_matching(G, M):
    """True iff the endpoints of M induce exactly the edges of M."""
    M = [tuple(sorted(e)) for e in M]
    if not is_matching(M):
        raise ContractError("not a matching")
    for u, v in M:
        if not G.has_edge(u, v):
            raise ContractError(f"({u},{v}) is not an edge")
    ends = 0
    for u, v in M:
        ends |= (1 << u) | (1 << v)
    return len(G.edges_within(ends)) == len(M)


def _max_induced(G, edges):
    if len(edges) > MU_MAX_EDGES:
        raise ResourceLimitError(f"{len(edges)} candidate edges exceed the guard of {MU_MAX_EDGES}")
    return [edges[i] for i in kernels.max_induced_subset(G.adj, edges)]


def max_induced_matching_touching(G, X):
    """A largest induced matching of G whose every edge meets X."""
    check_set(G, X)
    edges = [(u, v) for u, v in G.edges if ((X >> u) | (X >> v)) & 1]
    return _max_induced(G, edges)


def mu_of_set(G, X):
    """mu(X): size of a largest induced matching of G with every edge touching X."""
    return len(max_induced_matching_touching(G, X))


def refine_to_induced_matching(G, M):
    """A maximum subset of the matching M that is an induced matching."""
    M = sorted(tuple(sorted(e)) for e in M)
    if not is_matching(M):
        raise ContractError("not a matching")
    return _max_induced(G, M)


def _compact(G, mask):
    verts = members(mask)
    index = {v: i for i, v in enumerate(verts)}
    ladj = []
    for v in verts:
        la = 0
        for u in iter_members(G.adj[v] & mask):
            la |= 1 << index[u]
        ladj.append(la)
    return verts, ladj


def elimination_search(G, cost_of_bag=None, guard=TREEWIDTH_MAX_N):
    """Exact subset DP over elimination orderings of G.

    Without ``cost_of_bag`` the minimized quantity is the width, i.e. the result
    is the treewidth. With it, ``cost_of_bag(mask)`` must return a non-negative
    int and the maximum bag cost is minimized. Returns ``(value, order)``.
    """
    verts, ladj = _compact(G, G.vertices)
    if len(verts) > guard:
        raise ResourceLimitError(f"exact elimination search limited to {guard} vertices, got {len(verts)}")
    costs = None
    if cost_of_bag is not None:
        costs = []
        for local in range(1 << len(verts)):
            mask = 0
            for i, v in enumerate(verts):
                if (local >> i) & 1:
                    mask |= 1 << v
            costs.append(cost_of_bag(mask))
    value, order = kernels.elimination_dp(ladj, costs)
    return value, [verts[i] for i in order]


def elimination_bags(G, order):
    """Bag of each vertex when G is eliminated in ``order``: itself plus its later fill neighbors."""
    position = {v: i for i, v in enumerate(order)}
    eliminated = 0
    bags = {}
    for v in order:
        comp = 1 << v
        frontier = comp
        while frontier:
            f = frontier & -frontier
            frontier ^= f
            nb = G.adj[f.bit_length() - 1] & eliminated & ~comp
            comp |= nb
            frontier |= nb
        reach = 0
        for u in iter_members(comp):
            reach |= G.adj[u]
        bags[v] = (reach & ~eliminated & ~(1 << v)) | (1 << v)
        eliminated |= 1 << v
    return bags, position


def treewidth_exact(G, guard=TREEWIDTH_MAX_N):
    """Exact treewidth (-1 for the graph without vertices)."""
    return elimination_search(G, guard=guard)[0]


def treewidth_with_order(G, guard=TREEWIDTH_MAX_N):
    return elimination_search(G, guard=guard)


# ---------------------------------------------------------------- weights

class VertexWeights:
    """Exact weights plus the total vertex order used for tie-breaking.

    ``order`` lists the vertices from smallest to largest; the default is
    ascending vertex id.
    """

    __slots__ = ("weight", "order", "rank", "_scaled", "_scale")

    def __init__(self, weight, order=None):
        weight = tuple(Fraction(x) for x in weight)
        n = len(weight)
        if order is None:
            order = tuple(range(n))
        order = tuple(order)
        if sorted(order) != list(range(n)):
            raise ContractError("vertex order must be a permutation of 0..n-1")
        rank = [0] * n
        for i, v in enumerate(order):
            rank[v] = i
        self.weight = weight
        self.order = order
        self.rank = tuple(rank)
        self._scaled = None
        self._scale = None

    @classmethod
    def unit(cls, n):
        return cls([1] * n)

    @property
    def n(self):
        return len(self.weight)

    def __getitem__(self, v):
        return self.weight[v]

    def total(self, X):
        return sum((self.weight[v] for v in iter_members(X)), Fraction(0))

    def scaled(self):
        """Integer weights and the common denominator they are scaled by."""
        if self._scaled is None:
            from math import lcm
            den = 1
            for x in self.weight:
                den = lcm(den, x.denominator)
            self._scale = den
            self._scaled = tuple(int(x * den) for x in self.weight)
        return self._scaled, self._scale

    def is_identity_order(self):
        return self.order == tuple(range(len(self.order)))

    def __eq__(self, other):
        return isinstance(other, VertexWeights) and self.weight == other.weight and self.order == other.order

    def __repr__(self):
        return f"VertexWeights({[str(x) for x in self.weight]})"


def lex_key(X, rank=None):
    """Sort key under which a larger key means a lexicographically larger set."""
    if rank is None:
        seq = tuple(members(X))
    else:
        seq = tuple(sorted(rank[v] for v in iter_members(X)))
    return len(seq), seq


def lex_larger(A, B, order=None):
    """True iff A is lexicographically larger than B.

    Larger cardinality wins; otherwise the ascending sorted sequences are
    compared and A wins if its element is larger at the first difference.
    ``order`` is a ``VertexWeights`` or a rank tuple; default ascending ids.
    """
    rank = order.rank if isinstance(order, VertexWeights) else order
    if popcount(A) != popcount(B):
        return popcount(A) > popcount(B)
    diff = A ^ B
    if not diff:
        return False
    if rank is None:
        first = diff & -diff
    else:
        first = 1 << min(iter_members(diff), key=lambda v: rank[v])
    return bool(B & first)


def better(weight_a, set_a, weight_b, set_b, rank=None):
    """True iff (weight_a, set_a) beats (weight_b, set_b): weight first, then lex order."""
    if weight_a != weight_b:
        return weight_a > weight_b
    return lex_larger(set_a, set_b, rank)


# ---------------------------------------------------------- small utilities

def max_independent_set_size(G):
    return max(popcount(s) for s in maximal_independent_sets(G))


def all_matchings(G):
    """Every matching of G (including the empty one) as lists of edges."""
    edges = G.edges
    out = []

    def grow(start, used, chosen):
        out.append(list(chosen))
        for i in range(start, len(edges)):
            u, v = edges[i]
            b = (1 << u) | (1 << v)
            if not used & b:
                chosen.append(edges[i])
                grow(i + 1, used | b, chosen)
                chosen.pop()

    grow(0, 0, [])
    return out


def max_induced_matching_by_edge_subsets(G, X=None):
    """Second, independent enumeration of mu: try edge subsets from largest size down."""
    if X is None:
        X = G.vertices
    edges = [e for e in G.edges if ((X >> e[0]) | (X >> e[1])) & 1]
    for size in range(len(edges), 0, -1):
        for sub in combinations(edges, size):
            ends = 0
            ok = True
            for u, v in sub:
                b = (1 << u) | (1 << v)
                if ends & b:
                    ok = False
                    break
                ends |= b
            if ok and len(G.edges_within(ends)) == size:
                return size
    return 0
