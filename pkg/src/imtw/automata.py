"""Bottom-up automata over binary tree decompositions, and the preset catalogue.

An automaton has three transitions: ``leaf(G, X)`` for a leaf with bag X,
``step(G, q, X, Y)`` for a node with bag Y whose only child has bag X and state
q, and ``join(G, q1, q2, X1, X2, Z)`` for a node with bag Z and two children.
``accepting(q)`` decides acceptance at the root. States are hashable tuples and
serve directly as table keys.

All shipped automata derive from ``BagAutomaton``. Its states are triples
``(bag, edges, payload)`` where ``edges`` lists the graph edges inside the bag.
Each graph edge is processed exactly once, when it stops being contained in
the bag of the node above (or at acceptance for edges inside the root bag), and
each vertex is forgotten exactly once, at its topmost node. Subclasses only
describe what happens to the payload on introduce, edge, forget and merge.
"""

from .bits import iter_members, members, popcount
from .errors import ContractError

FAIL = None  # payload of a state that can never become accepting


class Automaton:
    name = "automaton"
    width = None  # None: any bag size

    def leaf(self, G, X):
        raise NotImplementedError

    def step(self, G, q, X, Y):
        raise NotImplementedError

    def join(self, G, q1, q2, X1, X2, Z):
        raise NotImplementedError

    def accepting(self, q):
        raise NotImplementedError

    def is_dead(self, q):
        """True only if no continuation of q can be accepting."""
        return False

    def state_bound(self, width):
        """Upper bound on the distinct states that share one bag, or None."""
        return None

    def encode(self, q):
        return repr(q).encode()

    def __repr__(self):
        return self.name


def _edges_inside(G, Y):
    out = []
    adj = G.adj
    for u in iter_members(Y):
        above = adj[u] & Y & ~((2 << u) - 1)
        for v in iter_members(above):
            out.append((u, v))
    return tuple(out)


class BagAutomaton(Automaton):
    """Automaton whose state tracks the current bag and its pending edges."""

    def empty(self):
        raise NotImplementedError

    def introduce(self, p, v):
        return p

    def edge(self, p, u, v):
        return p

    def forget(self, p, v):
        return p

    def merge(self, p1, p2, shared):
        raise NotImplementedError

    def final(self, p):
        raise NotImplementedError

    # generic machinery

    def _leave(self, p, bag, edges, keep):
        """Process edges not inside ``keep`` and forget ``bag - keep``."""
        for u, v in edges:
            if p is FAIL:
                return FAIL
            if not ((keep >> u) & 1 and (keep >> v) & 1):
                p = self.edge(p, u, v)
        for v in iter_members(bag & ~keep):
            if p is FAIL:
                return FAIL
            p = self.forget(p, v)
        return p

    def _enter(self, p, new):
        for v in iter_members(new):
            if p is FAIL:
                return FAIL
            p = self.introduce(p, v)
        return p

    def leaf(self, G, X):
        return (X, _edges_inside(G, X), self._enter(self.empty(), X))

    def step(self, G, q, X, Y):
        if X == Y:
            return q
        bag, edges, p = q
        p = self._leave(p, bag, edges, Y)
        p = self._enter(p, Y & ~bag)
        return (Y, _edges_inside(G, Y), p)

    def join(self, G, q1, q2, X1, X2, Z):
        bag1, edges1, p1 = q1
        bag2, edges2, p2 = q2
        p1 = self._leave(p1, bag1, edges1, Z)
        p2 = self._leave(p2, bag2, edges2, Z)
        if p1 is FAIL or p2 is FAIL:
            p = FAIL
        else:
            p = self.merge(p1, p2, (bag1 & Z) & (bag2 & Z))
        p = self._enter(p, Z & ~(bag1 | bag2))
        return (Z, _edges_inside(G, Z), p)

    def accepting(self, q):
        bag, edges, p = q
        p = self._leave(p, bag, edges, 0)
        return p is not FAIL and self.final(p)

    def is_dead(self, q):
        return q[2] is FAIL


# ----------------------------------------------------------------- catalogue

class Edgeless(BagAutomaton):
    """Accepts iff the graph has no edges."""

    name = "edgeless"

    def empty(self):
        return True

    def edge(self, p, u, v):
        return FAIL

    def merge(self, p1, p2, shared):
        return True

    def final(self, p):
        return True

    def state_bound(self, width):
        return 2


def _block_of(blocks, v):
    for i, b in enumerate(blocks):
        if (b >> v) & 1:
            return i
    raise KeyError(v)


def _canon(blocks):
    """Blocks ordered by their minimum vertex."""
    return tuple(sorted(blocks, key=lambda b: b & -b))


def _union_blocks(b1, b2, shared):
    """Glue two partitions along shared vertices.

    Returns the merged blocks and whether a cycle was closed: blocks are the
    nodes of a multigraph with one edge per shared vertex, and a repeated
    connection between already joined blocks means the union of the two
    acyclic graphs contains a cycle.
    """
    nodes = list(b1) + list(b2)
    parent = list(range(len(nodes)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    cycle = False
    off = len(b1)
    for v in iter_members(shared):
        a = find(_block_of(b1, v))
        b = find(off + _block_of(b2, v))
        if a == b:
            cycle = True
        else:
            parent[a] = b
    groups = {}
    for i, m in enumerate(nodes):
        r = find(i)
        groups[r] = groups.get(r, 0) | m
    return _canon(groups.values()), cycle


class Forest(BagAutomaton):
    """Accepts iff the graph is acyclic (equivalently, treewidth at most 1)."""

    name = "forest"

    def empty(self):
        return ()

    def introduce(self, p, v):
        return _canon(p + (1 << v,))

    def edge(self, p, u, v):
        i, j = _block_of(p, u), _block_of(p, v)
        if i == j:
            return FAIL
        rest = [b for k, b in enumerate(p) if k != i and k != j]
        return _canon(rest + [p[i] | p[j]])

    def forget(self, p, v):
        out = []
        for b in p:
            if (b >> v) & 1:
                b &= ~(1 << v)
            if b:
                out.append(b)
        return tuple(out)

    def merge(self, p1, p2, shared):
        blocks, cycle = _union_blocks(p1, p2, shared)
        return FAIL if cycle else blocks

    def final(self, p):
        return True


class Connected(BagAutomaton):
    """Accepts iff the graph is nonempty and connected.

    Payload: (blocks, closed) where ``closed`` counts components whose vertices
    were all forgotten, saturating at 2. A closed component next to any other
    vertex already means two components, so such payloads fail at once.
    """

    name = "connected"

    def empty(self):
        return ((), 0)

    @staticmethod
    def _norm(blocks, closed):
        if closed >= 2 or (closed == 1 and blocks):
            return FAIL
        return (blocks, closed)

    def introduce(self, p, v):
        blocks, closed = p
        return self._norm(_canon(blocks + (1 << v,)), closed)

    def edge(self, p, u, v):
        blocks, closed = p
        i, j = _block_of(blocks, u), _block_of(blocks, v)
        if i == j:
            return p
        rest = [b for k, b in enumerate(blocks) if k != i and k != j]
        return (_canon(rest + [blocks[i] | blocks[j]]), closed)

    def forget(self, p, v):
        blocks, closed = p
        out = []
        for b in blocks:
            if (b >> v) & 1:
                b &= ~(1 << v)
                if not b:
                    closed += 1
                    continue
            out.append(b)
        return self._norm(tuple(out), closed)

    def merge(self, p1, p2, shared):
        blocks, _ = _union_blocks(p1[0], p2[0], shared)
        return self._norm(blocks, p1[1] + p2[1])

    def final(self, p):
        return p[1] == 1


class _DegreeBase(BagAutomaton):
    def __init__(self, d):
        if d < 0:
            raise ContractError("degree bound must be non-negative")
        self.d = d

    def empty(self):
        return ()

    def introduce(self, p, v):
        return tuple(sorted(p + ((v, 0),)))

    def edge(self, p, u, v):
        out = []
        for x, deg in p:
            if x == u or x == v:
                deg += 1
                if deg > self.d:
                    return FAIL
            out.append((x, deg))
        return tuple(out)

    def merge(self, p1, p2, shared):
        deg = dict(p1)
        for x, k in p2:
            deg[x] = deg.get(x, 0) + k
            if deg[x] > self.d:
                return FAIL
        return tuple(sorted(deg.items()))

    def final(self, p):
        return True

    def state_bound(self, width):
        return (self.d + 1) ** (width + 1) + 1


class DegreeCap(_DegreeBase):
    """Accepts iff every vertex has degree at most d."""

    @property
    def name(self):
        return f"degree-cap:{self.d}"

    def forget(self, p, v):
        return tuple(e for e in p if e[0] != v)


class DegreeExact(_DegreeBase):
    """Accepts iff every vertex has degree exactly d."""

    @property
    def name(self):
        return f"degree-exact:{self.d}"

    def forget(self, p, v):
        out = []
        for x, deg in p:
            if x == v:
                if deg != self.d:
                    return FAIL
            else:
                out.append((x, deg))
        return tuple(out)


class SizeMod(BagAutomaton):
    """Accepts iff the number of vertices is congruent to q modulo r."""

    def __init__(self, q, r):
        if r < 1:
            raise ContractError("modulus must be positive")
        self.q = q % r
        self.r = r

    @property
    def name(self):
        return f"size-mod:{self.q}:{self.r}"

    def empty(self):
        return 0

    def forget(self, p, v):
        return (p + 1) % self.r

    def merge(self, p1, p2, shared):
        return (p1 + p2) % self.r

    def final(self, p):
        return p == self.q

    def state_bound(self, width):
        return self.r


class TrueAutomaton(BagAutomaton):
    """Accepts everything."""

    name = "true"

    def empty(self):
        return 0

    def merge(self, p1, p2, shared):
        return 0

    def final(self, p):
        return True

    def state_bound(self, width):
        return 1


class Product(BagAutomaton):
    """Conjunction of bag automata; the payload is the tuple of factor payloads."""

    def __init__(self, *factors):
        if not factors:
            raise ContractError("product needs at least one factor")
        for f in factors:
            if not isinstance(f, BagAutomaton):
                raise ContractError("product factors must be bag automata")
        self.factors = tuple(factors)

    @property
    def name(self):
        return "product(" + ", ".join(f.name for f in self.factors) + ")"

    def _lift(self, parts):
        for x in parts:
            if x is FAIL:
                return FAIL
        return tuple(parts)

    def empty(self):
        return self._lift([f.empty() for f in self.factors])

    def introduce(self, p, v):
        return self._lift([f.introduce(x, v) for f, x in zip(self.factors, p)])

    def edge(self, p, u, v):
        return self._lift([f.edge(x, u, v) for f, x in zip(self.factors, p)])

    def forget(self, p, v):
        return self._lift([f.forget(x, v) for f, x in zip(self.factors, p)])

    def merge(self, p1, p2, shared):
        return self._lift([f.merge(x, y, shared) for f, x, y in zip(self.factors, p1, p2)])

    def final(self, p):
        return all(f.final(x) for f, x in zip(self.factors, p))

    def state_bound(self, width):
        total = 1
        for f in self.factors:
            b = f.state_bound(width)
            if b is None:
                return None
            total *= b
        return total


# ----------------------------------------------------------------- running

def run(A, G, T):
    """Root state of A's bottom-up run on a rooted binary decomposition."""
    state = {}
    for t in T.postorder():
        bag = T.bags[t]
        if A.width is not None and popcount(bag) > A.width + 1:
            raise ContractError(f"bag of node {t} exceeds the automaton width {A.width}")
        kids = T.children[t]
        if not kids:
            state[t] = A.leaf(G, bag)
        elif len(kids) == 1:
            c = kids[0]
            state[t] = A.step(G, state[c], T.bags[c], bag)
        elif len(kids) == 2:
            c1, c2 = kids
            state[t] = A.join(G, state[c1], state[c2], T.bags[c1], T.bags[c2], bag)
        else:
            raise ContractError(f"node {t} has {len(kids)} children")
    return state[T.root]


def accepts(A, G, T):
    return A.accepting(run(A, G, T))


def neighborhood_state(A, G, v, NC):
    """State of A on the two-node decomposition: leaf NC + v below root NC."""
    if A.width is not None and popcount(NC) + 1 > A.width + 1:
        raise ContractError("neighborhood decomposition exceeds the automaton width")
    leaf_bag = NC | (1 << v)
    return A.step(G, A.leaf(G, leaf_bag), leaf_bag, NC)


# ----------------------------------------------------------------- presets

class Preset:
    def __init__(self, name, w, factory, description):
        self.name = name
        self.w = w
        self.factory = factory
        self.description = description

    def automaton(self, extra=()):
        base = self.factory()
        if not extra:
            return base
        factors = list(base.factors) if isinstance(base, Product) else [base]
        return Product(*factors, *extra)

    def __repr__(self):
        return f"Preset({self.name}, w={self.w})"


PRESETS = {
    "mwis": Preset("mwis", 0, Edgeless, "maximum-weight independent set"),
    "forest": Preset("forest", 1, Forest, "maximum-weight induced forest"),
    "tree": Preset("tree", 1, lambda: Product(Forest(), Connected()), "maximum-weight induced tree"),
    "path": Preset("path", 1, lambda: Product(Forest(), Connected(), DegreeCap(2)),
                   "maximum-weight induced path"),
    "cycle": Preset("cycle", 2, lambda: Product(Connected(), DegreeExact(2)),
                    "maximum-weight induced cycle"),
}


def parse_factor(text):
    """Automaton from a ``--with`` token such as ``degree-cap:3`` or ``size-mod:0:2``."""
    parts = text.split(":")
    name, args = parts[0], parts[1:]
    try:
        nums = [int(a) for a in args]
    except ValueError:
        raise ContractError(f"bad automaton argument in {text!r}") from None
    simple = {"edgeless": Edgeless, "forest": Forest, "connected": Connected, "true": TrueAutomaton}
    if name in simple and not nums:
        return simple[name]()
    if name == "degree-cap" and len(nums) == 1:
        return DegreeCap(nums[0])
    if name == "degree-exact" and len(nums) == 1:
        return DegreeExact(nums[0])
    if name == "size-mod" and len(nums) == 2:
        return SizeMod(nums[0], nums[1])
    raise ContractError(f"unknown automaton {text!r}")


def catalogue():
    return {
        "edgeless": Edgeless, "forest": Forest, "connected": Connected,
        "degree-cap": DegreeCap, "degree-exact": DegreeExact, "size-mod": SizeMod,
        "true": TrueAutomaton, "product": Product, "presets": dict(PRESETS),
    }


def describe_state(q):
    bag, _, p = q
    return f"bag={members(bag)} payload={p!r}"
