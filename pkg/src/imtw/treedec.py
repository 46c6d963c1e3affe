"""Tree decompositions: validation, width measures, rooting, and the supernice form.

A supernice decomposition is rooted and binary, has empty leaves and an empty
root, and every node is one of: an initial leaf, an introduce or forget node
(one vertex of difference to its only child), a join node (two children with
the same bag), a neutral node (one child, same bag) or the top node of a vertex
``v`` (a neutral-shaped node whose parent forgets ``v``). It is ``ell``-supernice
when every introduce, forget and join node has ``ell + 1`` neutral ancestors
directly above it.
"""

from collections import deque

from .bits import fmt, iter_members, members, popcount
from .errors import ContractError, NotSuperniceError, ResourceLimitError
from .graph import elimination_bags, elimination_search, mu_of_set
from .report import ValidationReport

INITIAL = "initial"
INTRODUCE = "introduce"
FORGET = "forget"
JOIN = "join"
NEUTRAL = "neutral"
TOP = "top"

SEARCH_MAX_N = 16


class TreeDecomposition:
    """Bags on an undirected tree; ``root`` is optional."""

    __slots__ = ("bags", "edges", "root", "_nbrs")

    def __init__(self, bags, edges=(), root=None):
        self.bags = tuple(bags)
        self.edges = tuple(sorted((min(a, b), max(a, b)) for a, b in edges))
        self.root = root
        self._nbrs = None

    @property
    def size(self):
        return len(self.bags)

    def neighbors(self):
        if self._nbrs is None:
            nb = [[] for _ in self.bags]
            for a, b in self.edges:
                nb[a].append(b)
                nb[b].append(a)
            self._nbrs = nb
        return self._nbrs

    def is_tree(self):
        n = len(self.bags)
        if n == 0 or len(self.edges) != n - 1:
            return False
        for a, b in self.edges:
            if not (0 <= a < n and 0 <= b < n) or a == b:
                return False
        if len(set(self.edges)) != len(self.edges):
            return False
        return len(_reach(self.neighbors(), 0)) == n

    def rooted(self, root=None):
        """(parent, children, order) with ``order`` listing nodes parents-first."""
        if root is None:
            root = self.root if self.root is not None else 0
        nb = self.neighbors()
        parent = [-1] * len(self.bags)
        children = [[] for _ in self.bags]
        order = [root]
        seen = {root}
        queue = deque([root])
        while queue:
            t = queue.popleft()
            for s in nb[t]:
                if s not in seen:
                    seen.add(s)
                    parent[s] = t
                    children[t].append(s)
                    order.append(s)
                    queue.append(s)
        return parent, children, order

    def vertices(self):
        out = 0
        for b in self.bags:
            out |= b
        return out

    def __eq__(self, other):
        return (isinstance(other, TreeDecomposition) and self.bags == other.bags
                and self.edges == other.edges)

    def __repr__(self):
        return f"TreeDecomposition(bags={[members(b) for b in self.bags]}, edges={list(self.edges)})"


def _reach(nbrs, start):
    seen = {start}
    stack = [start]
    while stack:
        t = stack.pop()
        for s in nbrs[t]:
            if s not in seen:
                seen.add(s)
                stack.append(s)
    return seen


def validate(G, T):
    """Check the tree shape and the vertex, edge and connectedness conditions."""
    rep = ValidationReport()
    if not T.is_tree():
        rep.add("tree", len(T.bags), "nodes and edges do not form a tree")
        return rep
    union = T.vertices()
    if union & ~G.vertices:
        rep.add("bag-range", members(union & ~G.vertices), "bag vertices outside the graph")
    for v in iter_members(G.vertices & ~union):
        rep.add("vertex", v, "vertex in no bag")
    for u, v in G.edges:
        pair = (1 << u) | (1 << v)
        if not any(b & pair == pair for b in T.bags):
            rep.add("edge", (u, v), "edge in no bag")
    nb = T.neighbors()
    for v in iter_members(union & G.vertices):
        holders = [t for t, b in enumerate(T.bags) if (b >> v) & 1]
        sub = {t: [s for s in nb[t] if (T.bags[s] >> v) & 1] for t in holders}
        if len(_reach(sub, holders[0])) != len(holders):
            rep.add("connectedness", v, f"nodes {holders} holding it are disconnected")
    return rep


def width(T):
    if not T.bags:
        raise ContractError("decomposition without nodes")
    return max(popcount(b) for b in T.bags) - 1


def mu_width(G, T):
    """Largest mu over the bags; 0 for decompositions of edgeless graphs."""
    if not T.bags:
        raise ContractError("decomposition without nodes")
    return max(mu_of_set(G, b) for b in set(T.bags))


# ------------------------------------------------------------------ rooted

class RootedDecomposition(TreeDecomposition):
    """A tree decomposition with parent/child arrays fixed by its root."""

    __slots__ = ("parent", "children", "order")

    def __init__(self, bags, edges, root):
        super().__init__(bags, edges, root)
        self.parent, self.children, self.order = self.rooted(root)

    def postorder(self):
        return self.order[::-1]


def binarize(T, root=None):
    """Rooted copy of T in which every node has at most two children.

    A node with children c1..cd (d > 2) keeps c1 and hands the rest to a chain
    of copies of itself.
    """
    if root is None:
        root = T.root if T.root is not None else 0
    parent, children, order = T.rooted(root)
    bags = list(T.bags)
    edges = []
    for t in order:
        kids = children[t]
        cur = t
        while len(kids) > 2:
            edges.append((cur, kids[0]))
            copy = len(bags)
            bags.append(bags[t])
            edges.append((cur, copy))
            cur = copy
            kids = kids[1:]
        for c in kids:
            edges.append((cur, c))
    return RootedDecomposition(bags, edges, root)


# --------------------------------------------------------------- supernice

class SuperniceDecomposition(RootedDecomposition):
    """Rooted binary decomposition with the node kinds of the supernice form.

    ``kinds[t]`` is a pair ``(kind, v)`` with ``v = -1`` for kinds without a
    vertex. Construction classifies all nodes and raises NotSuperniceError on
    the first node that fits no kind.
    """

    __slots__ = ("ell", "kinds", "subtree", "top", "topv")

    def __init__(self, bags, edges, root, ell):
        super().__init__(bags, edges, root)
        self.ell = ell
        self.kinds = classify_nodes(self)
        sub = [0] * len(self.bags)
        for t in self.postorder():
            m = self.bags[t]
            for c in self.children[t]:
                m |= sub[c]
            sub[t] = m
        self.subtree = tuple(sub)
        top = {}
        for t in self.order:
            for v in iter_members(self.bags[t]):
                top.setdefault(v, t)
        self.top = top
        topv = [0] * len(self.bags)
        for v, t in top.items():
            topv[t] |= 1 << v
        self.topv = tuple(topv)

    @classmethod
    def from_rooted(cls, R, ell):
        return cls(R.bags, R.edges, R.root, ell)


def classify_nodes(T):
    """Kind of every node of a rooted binary decomposition (list indexed by node)."""
    parent, children, bags = T.parent, T.children, T.bags
    kinds = [None] * len(bags)
    for t in range(len(bags)):
        kids = children[t]
        b = bags[t]
        if not kids:
            if b:
                raise NotSuperniceError(f"leaf {t} has non-empty bag {fmt(b)}", t)
            kinds[t] = (INITIAL, -1)
        elif len(kids) == 2:
            if bags[kids[0]] != b or bags[kids[1]] != b:
                raise NotSuperniceError(f"node {t} has two children with different bags", t)
            kinds[t] = (JOIN, -1)
        elif len(kids) == 1:
            cb = bags[kids[0]]
            if cb == b:
                kinds[t] = (NEUTRAL, -1)
            elif cb & ~b == 0 and popcount(b & ~cb) == 1:
                kinds[t] = (INTRODUCE, (b & ~cb).bit_length() - 1)
            elif b & ~cb == 0 and popcount(cb & ~b) == 1:
                kinds[t] = (FORGET, (cb & ~b).bit_length() - 1)
            else:
                raise NotSuperniceError(f"node {t} and its child differ in more than one vertex", t)
        else:
            raise NotSuperniceError(f"node {t} has {len(kids)} children", t)
    # neutral-shaped nodes below a forget node are top nodes
    for t in range(len(bags)):
        if kinds[t][0] == NEUTRAL and parent[t] >= 0:
            pk, pv = kinds[parent[t]]
            if pk == FORGET:
                kinds[t] = (TOP, pv)
    return kinds


def check_supernice(S, ell=None):
    """Report every way S fails to be an ``ell``-supernice decomposition."""
    if ell is None:
        ell = S.ell
    rep = ValidationReport()
    if S.bags[S.root]:
        rep.add("root-empty", S.root, f"root bag {fmt(S.bags[S.root])}")
    for t, (kind, v) in enumerate(S.kinds):
        if kind in (INTRODUCE, FORGET, JOIN):
            a = S.parent[t]
            for i in range(ell + 1):
                if a < 0 or S.kinds[a][0] != NEUTRAL:
                    rep.add("neutral-chain", t, f"{kind} node lacks neutral ancestor {i + 1} of {ell + 1}")
                    break
                a = S.parent[a]
    for v, t in S.top.items():
        if S.kinds[t] != (TOP, v):
            rep.add("top-kind", v, f"top node {t} is classified {S.kinds[t]}")
    for t, m in enumerate(S.topv):
        if popcount(m) > 1:
            rep.add("topv-size", t, f"tops of {members(m)}")
    return rep


def make_supernice(G, T, ell):
    """An ``ell``-supernice decomposition whose bags are subsets of bags of T.

    Phases: binarize (degree at most 3, using copies of the bag), subdivide
    every edge at a degree-3 node with a copy of that node's bag, hang an empty
    leaf on every leaf (plus an extra empty node above the chosen root leaf),
    smooth each edge to single-vertex steps (removals before additions, in
    ascending vertex order), replace each degree-2 node by ``ell + 3`` copies,
    and root at the extra empty node.
    """
    if ell < 0:
        raise ContractError("ell must be non-negative")
    rep = validate(G, T)
    if not rep.ok:
        raise ContractError("input decomposition is invalid:\n" + rep.text())

    bags = list(T.bags)
    nbrs = [list(x) for x in T.neighbors()]

    def new(bag):
        bags.append(bag)
        nbrs.append([])
        return len(bags) - 1

    def link(a, b):
        nbrs[a].append(b)
        nbrs[b].append(a)

    def subdivide(a, b, bag):
        x = new(bag)
        nbrs[a][nbrs[a].index(b)] = x
        nbrs[b][nbrs[b].index(a)] = x
        nbrs[x] = [a, b]
        return x

    # binarize
    for t in range(len(bags)):
        if len(nbrs[t]) > 3:
            rest = nbrs[t][2:]
            nbrs[t] = nbrs[t][:2]
            prev = t
            while rest:
                c = new(bags[t])
                link(prev, c)
                take = rest if len(rest) <= 2 else rest[:1]
                for s in take:
                    nbrs[s][nbrs[s].index(t)] = c
                    nbrs[c].append(s)
                rest = rest[len(take):]
                prev = c
    # equalize around branching nodes
    branching = [t for t in range(len(bags)) if len(nbrs[t]) == 3]
    for t in branching:
        for s in list(nbrs[t]):
            subdivide(t, s, bags[t])
    # empty leaves
    root_leaf = None
    for t in range(len(bags)):
        d = len(nbrs[t])
        if d <= 1:
            for _ in range(2 - d):
                e = new(0)
                link(t, e)
                if root_leaf is None:
                    root_leaf = e
    root = new(0)
    link(root_leaf, root)
    # smoothing
    pairs = sorted({(min(a, b), max(a, b)) for a in range(len(bags)) for b in nbrs[a]})
    for a, b in pairs:
        ba, bb = bags[a], bags[b]
        if popcount(ba ^ bb) <= 1:
            continue
        steps = []
        cur = ba
        for v in members(ba & ~bb):
            cur &= ~(1 << v)
            steps.append(cur)
        for v in members(bb & ~ba):
            cur |= 1 << v
            steps.append(cur)
        steps.pop()  # the last step is bag(b) itself
        left = a
        for bag in steps:
            left = subdivide(left, b, bag)
    # replicate path nodes
    path_nodes = [t for t in range(len(bags)) if len(nbrs[t]) == 2]
    for t in path_nodes:
        far = nbrs[t][1]
        cur = t
        for _ in range(ell + 2):
            cur = subdivide(cur, far, bags[t])

    # renumber parents-first from the root
    order = [root]
    seen = {root}
    queue = deque([root])
    while queue:
        t = queue.popleft()
        for s in nbrs[t]:
            if s not in seen:
                seen.add(s)
                order.append(s)
                queue.append(s)
    index = {t: i for i, t in enumerate(order)}
    new_bags = [bags[t] for t in order]
    edges = []
    for t in order:
        for s in nbrs[t]:
            if index[t] < index[s]:
                edges.append((index[t], index[s]))
    return SuperniceDecomposition(new_bags, edges, 0, ell)


def supernice_size_bound(nodes, n, ell):
    """Upper bound on make_supernice's node count, as c * (nodes + n + ell) ** 3.

    Binarizing leaves at most 3N nodes, subdividing at most doubles the edges
    twice over (9N nodes), and the empty leaves at most double that plus the
    extra root, so before smoothing there are at most 18N + 2 nodes. Smoothing
    puts at most 2n - 1 nodes on each edge and replication multiplies by
    ell + 3. With s = N + n + ell and N >= 1:
    (18N + 2)(2n + 1)(ell + 3) <= 20s * 3s * 4s = 240 s**3.
    """
    return SUPERNICE_C * (nodes + n + ell) ** 3


SUPERNICE_C = 240


# -------------------------------------------------------------- acquisition

def td_from_order(G, order):
    """The decomposition induced by an elimination ordering of G."""
    if not order:
        return TreeDecomposition([0], [])
    bags_by_v, pos = elimination_bags(G, order)
    bags = [bags_by_v[v] for v in order]
    edges = []
    roots = []
    for i, v in enumerate(order):
        later = bags_by_v[v] & ~(1 << v)
        if later:
            nxt = min(iter_members(later), key=lambda u: pos[u])
            edges.append((i, pos[nxt]))
        else:
            roots.append(i)
    for a, b in zip(roots, roots[1:]):
        edges.append((a, b))
    return TreeDecomposition(bags, edges)


def trivial_decomposition(G):
    return TreeDecomposition([G.vertices], [])


def search_decomposition(G, guard=SEARCH_MAX_N):
    """Elimination-ordering decomposition minimizing mu-width, then width.

    Exact over all orderings via the subset DP, with bag cost
    ``mu(bag) * (n + 1) + |bag|`` so that mu dominates.
    """
    if popcount(G.vertices) > guard:
        raise ResourceLimitError(f"decomposition search limited to {guard} vertices")
    scale = G.n + 1
    memo = {}

    def cost(mask):
        c = memo.get(mask)
        if c is None:
            c = mu_of_set(G, mask) * scale + popcount(mask)
            memo[mask] = c
        return c

    _, order = elimination_search(G, cost, guard=guard)
    return td_from_order(G, order)


def treewidth_decomposition(G):
    _, order = elimination_search(G)
    return td_from_order(G, order)


def acquire_decomposition(G, source, path=None):
    """Working decomposition from a file, the single bag, or exhaustive search."""
    if source == "file":
        from .formats import read_td
        T = read_td(path, G.n)
        rep = validate(G, T)
        if not rep.ok:
            raise ContractError(f"decomposition in {path} is invalid:\n{rep.text()}")
        return T
    if source == "trivial":
        return trivial_decomposition(G)
    if source == "search":
        return search_decomposition(G)
    if source == "treewidth":
        return treewidth_decomposition(G)
    raise ContractError(f"unknown decomposition source {source!r}")

