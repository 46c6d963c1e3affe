"""Inner decompositions: a decomposition of G[X] laid over the host's own tree.

Given a supernice host and a solution X, ``build_inner`` splits X into X1
(high-degree vertices and low-degree vertices with a low-degree neighbor) and
the independent rest X2, and assigns every host node an inner bag. X1 vertices
follow their host bags, high-degree vertices are extended upward to reach the
top nodes of their X2 neighbors, and each X2 vertex sits only at its top node.
Vertices that would leave together at a forget node are instead released one
per node along the neutral chain above it.

This module is a test oracle for the dynamic programming: the solver never
builds inner decompositions itself.
"""

from dataclasses import dataclass

from .bits import fmt, iter_members, popcount
from .errors import ContractError, InvariantError
from .graph import induced_subgraph, treewidth_exact
from .report import ValidationReport
from .treedec import FORGET, INTRODUCE, JOIN, NEUTRAL, TOP, TreeDecomposition, validate


def ell_bound(k, w):
    """Inner width bound: the three per-bag component bounds added up."""
    if k < 0 or w < 0:
        raise ContractError("k and w must be non-negative")
    return k * (w + 1) * (5 * w + 6)


def component_bounds(k, w):
    """Bounds on |bag & X_H|, |bag & X_LL| and |outH| for a single bag."""
    return k * (w + 1) ** 2, k * (w + 1) * (2 * w + 3), 2 * k * (w + 1) ** 2


@dataclass(frozen=True)
class SolutionPartition:
    X1: int
    X2: int
    XH: int
    XL: int
    XLL: int

    @property
    def X(self):
        return self.X1 | self.X2


def partition_solution(G, X, w):
    limit = 2 * (w + 1)
    XH = 0
    for v in iter_members(X):
        if popcount(G.adj[v] & X) > limit:
            XH |= 1 << v
    XL = X & ~XH
    XLL = 0
    for v in iter_members(XL):
        if G.adj[v] & XL:
            XLL |= 1 << v
    return SolutionPartition(XH | XLL, XL & ~XLL, XH, XL, XLL)


@dataclass
class InnerDecomposition:
    host: object
    ibag: list
    ell: int
    before_release: list  # inner bags before the one-by-one release edit

    def width(self):
        return max(popcount(b) for b in self.ibag) - 1

    def as_decomposition(self):
        return TreeDecomposition(self.ibag, self.host.edges, self.host.root)


def out_high(G, host, part, t):
    """High-degree vertices below t with a low-degree neighbor in bag(t)."""
    low_here = host.bags[t] & part.XL
    out = 0
    for u in iter_members(part.XH & host.subtree[t]):
        if G.adj[u] & low_here:
            out |= 1 << u
    return out


def build_inner(G, host, X, w, ell=None, rank=None, check_tw=True):
    """Partition X and lay an inner decomposition of G[X] over ``host``."""
    if ell is None:
        ell = host.ell
    if X & ~G.vertices:
        raise ContractError("solution leaves the vertex set")
    if check_tw and treewidth_exact(induced_subgraph(G, X)) > w:
        raise ContractError(f"G[X] has treewidth above {w}")
    part = partition_solution(G, X, w)
    X1, X2 = part.X1, part.X2
    first = []
    for t, bag in enumerate(host.bags):
        first.append((bag & X1) | out_high(G, host, part, t) | (host.topv[t] & X2))
    ibag = list(first)
    order = rank if rank is not None else list(range(G.n))
    for t, (kind, v) in enumerate(host.kinds):
        if kind != FORGET:
            continue
        c = host.children[t][0]
        excess = first[c] & ~first[t]
        rest = sorted(iter_members(excess & ~(1 << v)), key=lambda u: order[u])
        if (excess >> v) & 1 and not (X2 >> v) & 1:
            rest.append(v)
        if len(rest) > ell + 1:
            raise InvariantError(f"forget node {t} releases {len(rest)} vertices, more than {ell + 1}")
        cur = first[c] & ~(1 << v) if (X2 >> v) & 1 else first[c]
        ibag[t] = cur
        a = t
        for i in range(ell + 1):
            a = host.parent[a]
            if a < 0 or host.kinds[a][0] != NEUTRAL:
                raise ContractError(f"forget node {t} lacks {ell + 1} neutral ancestors")
            if i < len(rest):
                cur &= ~(1 << rest[i])
            ibag[a] = cur
        if cur != first[t]:
            raise InvariantError(f"release chain above node {t} does not end at its bag")
    inner = InnerDecomposition(host, ibag, ell, first)
    return part, inner


def verify_inner(G, host, part, inner, ell=None):
    """Every structural property of a partition and inner decomposition."""
    if ell is None:
        ell = inner.ell
    rep = ValidationReport()
    X1, X2 = part.X1, part.X2
    X = X1 | X2
    ibag = inner.ibag
    bags = host.bags

    if X1 & X2:
        rep.add("partition", fmt(X1 & X2), "X1 and X2 overlap")
    if part.X1 != (part.XH | part.XLL) or part.X2 != (part.XL & ~part.XLL):
        rep.add("partition", "provenance", "X1/X2 do not match the degree classes")
    for v in iter_members(X2):
        if G.adj[v] & X2:
            rep.add("x2-independent", v, "X2 vertex with an X2 neighbor")
            break

    if len(ibag) != len(bags):
        rep.add("shape", len(ibag), "inner bag count differs from host")
        return rep
    for t, b in enumerate(ibag):
        if b & ~X:
            rep.add("tree-decomposition", t, f"inner bag {fmt(b)} leaves X")
    sub = validate(induced_subgraph(G, X), TreeDecomposition([b & X for b in ibag], host.edges))
    for viol in sub.violations:
        rep.add("tree-decomposition", viol.witness, f"{viol.condition} {viol.detail}".strip())
    for t, b in enumerate(ibag):
        if popcount(b) > ell + 1:
            rep.add("width", t, f"inner bag of size {popcount(b)} exceeds {ell + 1}")

    for t, b in enumerate(ibag):
        low, high = bags[t] & X1, host.subtree[t] & X1
        if low & ~b:
            rep.add("item2", t, f"bag vertices {fmt(low & ~b)} of X1 missing")
        if (b & X1) & ~high:
            rep.add("item2", t, f"X1 vertices {fmt((b & X1) & ~high)} outside the subtree")
    for v in iter_members(X2):
        holders = [t for t, b in enumerate(ibag) if (b >> v) & 1]
        if holders != [host.top[v]]:
            rep.add("item3", v, f"X2 vertex held by nodes {holders}, top is {host.top[v]}")

    for t, (kind, v) in enumerate(host.kinds):
        b = ibag[t]
        kids = host.children[t]
        if kind == INTRODUCE:
            cb = ibag[kids[0]]
            if b != cb and b != cb | (1 << v):
                rep.add("introduce", t, "inner bag changes by more than the introduced vertex")
        elif kind == FORGET:
            cb = ibag[kids[0]]
            inx2 = (X2 >> v) & 1
            if not ((b == cb and not inx2) or (inx2 and b == cb & ~(1 << v) and b != cb)):
                rep.add("forget", t, "inner bag does not follow the forget rule")
        elif kind == JOIN:
            b1, b2 = ibag[kids[0]], ibag[kids[1]]
            if b != b1 | b2:
                rep.add("join", t, "inner bag is not the union of the children")
            if b1 & b2 != b & bags[t]:
                rep.add("join", t, "children overlap outside the host bag")
        elif kind == NEUTRAL:
            cb = ibag[kids[0]]
            gone = cb & ~b
            if b & ~cb or popcount(gone) > 1 or gone & ~X1:
                rep.add("neutral", t, "inner bag does not follow the neutral rule")
        elif kind == TOP:
            cb = ibag[kids[0]]
            inx2 = (X2 >> v) & 1
            ok = (b == cb and not inx2) or (inx2 and b == cb | (1 << v) and not (cb >> v) & 1)
            if not ok:
                rep.add("top", t, "inner bag does not follow the top rule")
    if ibag[host.root]:
        rep.add("root", host.root, f"root inner bag {fmt(ibag[host.root])}")

    for t in range(len(bags)):
        here = X2 & bags[t]
        nb = 0
        for v in iter_members(here):
            nb |= G.adj[v]
        need = nb & X1 & host.subtree[t]
        if need & ~ibag[t]:
            rep.add("x2-neighbors", t, f"X1 neighbors {fmt(need & ~ibag[t])} of bag X2 vertices missing")
    return rep


def component_sizes(G, host, part, t):
    """(|bag & X_H|, |bag & X_LL|, |outH|) at node t."""
    bag = host.bags[t]
    return (popcount(bag & part.XH), popcount(bag & part.XLL),
            popcount(out_high(G, host, part, t)))
