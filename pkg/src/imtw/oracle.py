"""Exhaustive ground truth and direct property checkers.

The checkers look only at the graph (traversals and degree counts); they share
no code with the automata so the two can be cross-validated.
"""

from dataclasses import dataclass, field
from fractions import Fraction

from .bits import iter_members, popcount
from .errors import ContractError, ResourceLimitError
from .graph import induced_subgraph, lex_key, treewidth_exact
from .report import ValidationReport

ORACLE_MAX_N = 14


def _components(G):
    left = G.vertices
    comps = []
    while left:
        seed = left & -left
        comp = seed
        frontier = seed
        while frontier:
            f = frontier & -frontier
            frontier ^= f
            new = G.adj[f.bit_length() - 1] & ~comp
            comp |= new
            frontier |= new
        comps.append(comp)
        left &= ~comp
    return comps


def is_edgeless(G):
    return all(G.adj[v] == 0 for v in iter_members(G.vertices))


def is_forest(G):
    """Acyclic iff every component with c vertices has exactly c - 1 edges."""
    for comp in _components(G):
        edges = sum(popcount(G.adj[v]) for v in iter_members(comp)) // 2
        if edges != popcount(comp) - 1:
            return False
    return True


def is_connected(G):
    """Nonempty and a single component; the empty graph is not connected here."""
    return len(_components(G)) == 1


def max_degree_le(d):
    def check(G):
        return all(popcount(G.adj[v]) <= d for v in iter_members(G.vertices))
    check.__name__ = f"max_degree_le_{d}"
    return check


def degree_exactly(d):
    def check(G):
        return all(popcount(G.adj[v]) == d for v in iter_members(G.vertices))
    check.__name__ = f"degree_exactly_{d}"
    return check


def size_mod(q, r):
    def check(G):
        return popcount(G.vertices) % r == q % r
    check.__name__ = f"size_mod_{q}_{r}"
    return check


def is_tree(G):
    return is_connected(G) and is_forest(G)


def is_path(G):
    """A single vertex counts as a path; the empty graph does not."""
    return is_connected(G) and is_forest(G) and max_degree_le(2)(G)


def is_cycle(G):
    return is_connected(G) and degree_exactly(2)(G)


def always(G):
    return True


def direct_checkers():
    return {
        "edgeless": is_edgeless, "forest": is_forest, "connected": is_connected,
        "tree": is_tree, "path": is_path, "cycle": is_cycle,
        "max_degree_le": max_degree_le, "degree_exactly": degree_exactly,
        "size_mod": size_mod, "true": always,
    }


PRESET_CHECKERS = {
    "mwis": (0, is_edgeless),
    "forest": (1, is_forest),
    "tree": (1, is_tree),
    "path": (1, is_path),
    "cycle": (2, is_cycle),
}


def checker_for_token(text):
    """Checker matching an automaton token such as ``degree-cap:2``."""
    parts = text.split(":")
    name, args = parts[0], parts[1:]
    try:
        nums = [int(a) for a in args]
    except ValueError:
        raise ContractError(f"bad checker argument in {text!r}") from None
    simple = {"edgeless": is_edgeless, "forest": is_forest, "connected": is_connected, "true": always}
    if name in simple and not nums:
        return simple[name]
    if name == "degree-cap" and len(nums) == 1:
        return max_degree_le(nums[0])
    if name == "degree-exact" and len(nums) == 1:
        return degree_exactly(nums[0])
    if name == "size-mod" and len(nums) == 2:
        return size_mod(nums[0], nums[1])
    raise ContractError(f"unknown checker {text!r}")


@dataclass
class ProblemSpec:
    name: str
    w: int
    checker: object
    extra: tuple = ()

    @classmethod
    def preset(cls, name, extra=(), w=None):
        if name not in PRESET_CHECKERS:
            raise ContractError(f"unknown preset {name!r}")
        base_w, base = PRESET_CHECKERS[name]
        if w is not None and w != base_w:
            raise ContractError(f"preset {name} decides treewidth at most {base_w}, not {w}")
        extra = tuple(extra)
        checks = [base] + [checker_for_token(t) for t in extra]

        def check(G):
            return all(c(G) for c in checks)

        return cls(name, base_w, check, extra)

    def holds(self, G, X):
        return self.checker(induced_subgraph(G, X))


def brute_force_optimal(G, weights, spec, guard=ORACLE_MAX_N):
    """The optimal solution: maximum weight, ties broken toward the lex-larger set.

    Returns ``(X, weight)`` or None when no subset is feasible.
    """
    n_v = popcount(G.vertices)
    if n_v > guard:
        raise ResourceLimitError(f"oracle limited to {guard} vertices, got {n_v}")
    verts = list(iter_members(G.vertices))
    rank = weights.rank
    candidates = []
    for local in range(1 << n_v):
        X = 0
        wt = Fraction(0)
        for i, v in enumerate(verts):
            if (local >> i) & 1:
                X |= 1 << v
                wt += weights[v]
        candidates.append((wt, lex_key(X, rank), X))
    candidates.sort(reverse=True)
    for wt, _, X in candidates:
        H = induced_subgraph(G, X)
        if spec.checker(H) and treewidth_exact(H) <= spec.w:
            return X, wt
    return None


def all_feasible(G, spec):
    """Every feasible subset, for small exhaustive tests."""
    out = []
    for X in range(1 << G.n):
        if X & ~G.vertices:
            continue
        H = induced_subgraph(G, X)
        if spec.checker(H) and treewidth_exact(H) <= spec.w:
            out.append(X)
    return out


@dataclass
class Feasibility:
    weight: Fraction
    report: ValidationReport = field(default_factory=ValidationReport)

    @property
    def ok(self):
        return self.report.ok


def feasibility_check(G, weights, spec, X, host=None, families=None):
    """Check X as an answer: treewidth bound, property, and optionally family membership.

    ``host`` and ``families`` (node -> set of masks) add the per-bag check.
    """
    if X & ~G.vertices:
        result = Feasibility(None)
        result.report.add("range", X, "set leaves the vertex set")
        return result
    result = Feasibility(weights.total(X))
    H = induced_subgraph(G, X)
    tw = treewidth_exact(H)
    if tw > spec.w:
        result.report.add("treewidth", tw, f"exceeds {spec.w}")
    if not spec.checker(H):
        result.report.add("checker", spec.name, "property fails")
    if families is not None:
        for t, bag in enumerate(host.bags):
            if (X & bag) not in families[t]:
                result.report.add("family", t, "bag intersection not enumerated")
                break
    return result
