"""Dynamic programming over a supernice decomposition, guided by inner bags.

A table entry is keyed by ``(Xt, B1, B2, q)``: the solution's intersection
with the host bag, the part of the inner bag made of X1 vertices, the single
X2 vertex present at a top node (or nothing), and the automaton state reached
on the inner bags. The value is the best witness ``(weight, X1, X2)`` found
for that key, where weights are the scaled integers of ``VertexWeights``.

Tables are built forward from the children. The inner bags are never
fixed in advance; every transition decides how the inner bag of the parent
relates to that of the child, following the per-kind shape rules of inner
decompositions. Vertices leave the inner bag only at neutral nodes.
"""

from dataclasses import dataclass, field
from fractions import Fraction

from .bits import fmt, iter_members, popcount
from .errors import ContractError, InvariantError
from .graph import lex_key
from .report import ValidationReport
from .treedec import FORGET, INITIAL, INTRODUCE, JOIN, NEUTRAL, TOP

EAGER = "eager"
ALL_DROPS = "all"


@dataclass
class TableStats:
    node: int
    kind: str
    entries: int
    max_inner: int
    shared: bool = False


@dataclass
class DPResult:
    solution: object  # int mask or None
    weight: object  # Fraction or None
    state: object = None
    stats: list = field(default_factory=list)
    tables: object = None

    @property
    def feasible(self):
        return self.solution is not None

    def summary(self):
        total = sum(s.entries for s in self.stats)
        peak = max((s.entries for s in self.stats), default=0)
        inner = max((s.max_inner for s in self.stats), default=0)
        shared = sum(1 for s in self.stats if s.shared)
        return (f"nodes {len(self.stats)} entries {total} peak {peak} "
                f"max-inner {inner} shared {shared}")


class _Run:
    def __init__(self, G, weights, host, families, A, w, ell, drop_policy, prune_dead):
        if drop_policy not in (EAGER, ALL_DROPS):
            raise ContractError(f"unknown drop policy {drop_policy!r}")
        if len(families) != len(host.bags):
            raise ContractError("one family per decomposition node is required")
        self.G = G
        self.adj = G.adj
        self.wt, _ = weights.scaled()
        self.rank = weights.rank
        self.host = host
        self.families = families
        self.A = A
        self.w = w
        self.cap = ell + 1
        self.eager = drop_policy == EAGER
        self.prune_dead = prune_dead
        self.settled = set()  # neutral tables with nothing left to drop

    def weight_of(self, X):
        wt = self.wt
        return sum(wt[v] for v in iter_members(X))

    def offer(self, table, key, weight, X1, X2):
        q = key[3]
        if self.prune_dead and self.A.is_dead(q):
            return
        old = table.get(key)
        if old is None or weight > old[0] or (
                weight == old[0] and lex_key(X1 | X2, self.rank) > lex_key(old[1] | old[2], self.rank)):
            table[key] = (weight, X1, X2)

    # ------------------------------------------------------------ transitions

    def initial(self, t):
        table = {}
        if 0 in self.families[t]:
            self.offer(table, (0, 0, 0, self.A.leaf(self.G, 0)), 0, 0, 0)
        return table

    def introduce(self, t, v, child):
        fam = self.families[t]
        G, A, adj = self.G, self.A, self.adj
        bit = 1 << v
        wv = self.wt[v]
        table = {}
        for (Xc, B1c, B2c, qc), (wc, X1, X2) in child.items():
            if B2c:
                continue
            if Xc in fam:
                self.offer(table, (Xc, B1c, 0, qc), wc, X1, X2)
            Xt = Xc | bit
            if Xt not in fam:
                continue
            if popcount(B1c) < self.cap:
                B1 = B1c | bit
                q = A.step(G, qc, B1c, B1)
                self.offer(table, (Xt, B1, 0, q), wc + wv, X1 | bit, X2)
            if not adj[v] & (Xc & ~B1c):
                self.offer(table, (Xt, B1c, 0, qc), wc + wv, X1, X2 | bit)
        return table

    def forget(self, t, v, child):
        fam = self.families[t]
        G, A = self.G, self.A
        bit = 1 << v
        table = {}
        for (Xc, B1c, B2c, qc), val in child.items():
            if B2c:
                Xt = Xc & ~bit
                if Xt in fam:
                    q = A.step(G, qc, B1c | B2c, B1c)
                    self.offer(table, (Xt, B1c, 0, q), *val)
            elif not Xc & bit:
                if Xc in fam:
                    self.offer(table, (Xc, B1c, 0, qc), *val)
            elif B1c & bit:
                Xt = Xc & ~bit
                if Xt in fam:
                    self.offer(table, (Xt, B1c, 0, qc), *val)
            # v in Xc outside B1c without B2: v was never placed, discard
        return table

    def join(self, t, left, right):
        fam = self.families[t]
        bag = self.host.bags[t]
        G, A = self.G, self.A
        groups = {}
        for key, val in right.items():
            Xc, B1c, B2c, qc = key
            if B2c or Xc not in fam:
                continue
            groups.setdefault((Xc, B1c & bag), []).append((B1c, qc, val))
        table = {}
        for (Xc, B1a, B2a, qa), (wa, X1a, X2a) in left.items():
            if B2a:
                continue
            partners = groups.get((Xc, B1a & bag))
            if not partners:
                continue
            shared_w = self.weight_of(Xc)
            for B1b, qb, (wb, X1b, X2b) in partners:
                B1 = B1a | B1b
                if popcount(B1) > self.cap:
                    continue
                q = A.join(G, qa, qb, B1a, B1b, B1)
                self.offer(table, (Xc, B1, 0, q), wa + wb - shared_w, X1a | X1b, X2a | X2b)
        return table

    def droppable(self, bag, Xt, B1):
        adj = self.adj
        loose = Xt & ~B1
        for u in iter_members(B1 & ~bag):
            if not adj[u] & loose:
                yield u

    def neutral(self, t, c, child):
        fam = self.families[t]
        bag = self.host.bags[t]
        G, A = self.G, self.A
        same_family = fam is self.families[c] or fam == self.families[c]
        if c in self.settled and same_family and bag == self.host.bags[c]:
            self.settled.add(t)
            return child, True
        table = {}
        moved = False
        for key, val in child.items():
            Xc, B1c, B2c, qc = key
            if B2c:
                raise InvariantError(f"neutral node {t} has a child entry with an X2 vertex")
            if Xc not in fam:
                moved = True
                continue
            drops = list(self.droppable(bag, Xc, B1c))
            if drops:
                moved = True
                if self.eager:
                    drops = drops[:1]
                for u in drops:
                    B1 = B1c & ~(1 << u)
                    self.offer(table, (Xc, B1, 0, A.step(G, qc, B1c, B1)), *val)
                if self.eager:
                    continue
            self.offer(table, key, *val)
        if not moved:
            self.settled.add(t)
            return child, True
        return table, False

    def top(self, t, v, c, child):
        fam = self.families[t]
        G, A, adj = self.G, self.A, self.adj
        bit = 1 << v
        below = self.host.subtree[c]
        table = {}
        for key, val in child.items():
            Xc, B1c, B2c, qc = key
            if B2c or Xc not in fam:
                continue
            if not Xc & bit or B1c & bit:
                self.offer(table, key, *val)
                continue
            # v belongs to X2: it has to enter the inner bag here
            wc, X1, X2 = val
            if adj[v] & X1 & below & ~B1c:
                continue
            if popcount(B1c) + 1 > self.cap:
                continue
            q = A.step(G, qc, B1c, B1c | bit)
            self.offer(table, (Xc, B1c, bit, q), wc, X1, X2)
        return table

    # -------------------------------------------------------------- driver

    def node(self, t, tables):
        kind, v = self.host.kinds[t]
        kids = self.host.children[t]
        shared = False
        if kind == INITIAL:
            table = self.initial(t)
        elif kind == INTRODUCE:
            table = self.introduce(t, v, tables[kids[0]])
        elif kind == FORGET:
            table = self.forget(t, v, tables[kids[0]])
        elif kind == JOIN:
            table = self.join(t, tables[kids[0]], tables[kids[1]])
        elif kind == NEUTRAL:
            table, shared = self.neutral(t, kids[0], tables[kids[0]])
        elif kind == TOP:
            table = self.top(t, v, kids[0], tables[kids[0]])
        else:
            raise ContractError(f"node {t} has unknown kind {kind!r}")
        inner = max((popcount(k[1] | k[2]) for k in table), default=0)
        return table, TableStats(t, kind, len(table), inner, shared)


def solve(G, weights, host, families, A, w, ell, drop_policy=EAGER, prune_dead=True,
          keep_tables=False):
    """Best feasible set under ``A`` whose bag intersections come from ``families``.

    ``host`` must be a supernice decomposition of G with an empty root bag;
    ``families[t]`` is the set of allowed intersections with ``bag(t)``.
    With ``drop_policy="eager"`` a neutral node drops only the smallest
    droppable inner-bag vertex and never keeps an entry that could drop one;
    ``"all"`` generates every drop together with the unchanged entry.
    Returns a ``DPResult``; its solution is None when nothing is feasible.
    """
    run = _Run(G, weights, host, families, A, w, ell, drop_policy, prune_dead)
    if host.bags[host.root]:
        raise ContractError(f"root bag {fmt(host.bags[host.root])} is not empty")
    tables = {}
    stats = []
    kept = {} if keep_tables else None
    for t in host.postorder():
        table, st = run.node(t, tables)
        tables[t] = table
        stats.append(st)
        if keep_tables:
            kept[t] = table
        for c in host.children[t]:
            del tables[c]
    root = tables[host.root]
    best = None
    for (Xt, B1, B2, q), val in root.items():
        if Xt or B1 or B2 or not A.accepting(q):
            continue
        if best is None or val[0] > best[1][0] or (
                val[0] == best[1][0] and lex_key(val[1] | val[2], run.rank) > lex_key(best[1][1] | best[1][2], run.rank)):
            best = (q, val)
    _, scale = weights.scaled()
    if best is None:
        return DPResult(None, None, None, stats, kept)
    q, (wt, X1, X2) = best
    return DPResult(X1 | X2, Fraction(wt, scale), q, stats, kept)


def audit_tables(G, weights, host, families, A, ell, tables):
    """Check every stored witness against the conditions its key promises."""
    rep = ValidationReport()
    wt, _ = weights.scaled()
    adj = G.adj
    below_nodes = {}
    for t in host.postorder():
        s = {t}
        for c in host.children[t]:
            s |= below_nodes[c]
        below_nodes[t] = s
    for t, table in tables.items():
        bag, sub = host.bags[t], host.subtree[t]
        for (Xt, B1, B2, q), (weight, X1, X2) in table.items():
            X = X1 | X2
            where = (t, fmt(Xt), fmt(B1), fmt(B2))
            if X1 & X2:
                rep.add("witness-disjoint", where, "X1 and X2 overlap")
            if X & ~sub:
                rep.add("witness-subtree", where, "witness leaves the subtree")
            if X & bag != Xt:
                rep.add("bag-intersection", where, f"witness meets the bag in {fmt(X & bag)}")
            if B1 & ~X1 or B2 & ~X2:
                rep.add("inner-bag", where, "inner bag not drawn from the witness")
            if (X1 & bag) & ~B1:
                rep.add("inner-bag", where, "X1 bag vertices missing from B1")
            if popcount(B1 | B2) > ell + 1 or popcount(B2) > 1:
                rep.add("inner-width", where, "inner bag too large")
            if q[0] != B1 | B2:
                rep.add("state-bag", where, "automaton state sits on another bag")
            for v in iter_members(X2):
                if adj[v] & X2:
                    rep.add("x2-independent", where, f"X2 vertex {v} has an X2 neighbor")
                    break
            if weight != sum(wt[v] for v in iter_members(X)):
                rep.add("weight", where, "stored weight differs from the witness")
            for s in below_nodes[t]:
                if (X & host.bags[s]) not in families[s]:
                    rep.add("admissible", where, f"intersection with node {s} not in its family")
                    break
    return rep
