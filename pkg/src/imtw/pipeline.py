"""End-to-end solving: decomposition, width check, families, normalization, DP."""

import time
from dataclasses import dataclass, field

from .automata import PRESETS, parse_factor
from .dp import EAGER, solve
from .errors import ContractError
from .graph import VertexWeights, maximal_independent_sets
from .inner import ell_bound
from .oracle import ProblemSpec, feasibility_check
from .signatures import BOUNDED, enumerate_bag_family
from .treedec import acquire_decomposition, make_supernice, mu_width

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
MU_EXCEEDED = "mu-exceeded"


@dataclass
class Instance:
    graph: object
    weights: object = None
    problem: str = "mwis"
    extra: tuple = ()  # extra automaton factors, e.g. ("degree-cap:3",)
    w: int = None
    k: int = None
    decomposition: object = None
    td_source: str = "search"
    family_mode: str = BOUNDED
    drop_policy: str = EAGER
    ell: int = None  # override for ell_bound(k, w)

    def __post_init__(self):
        if self.weights is None:
            self.weights = VertexWeights.unit(self.graph.n)
        if self.weights.n != self.graph.n:
            raise ContractError(f"{self.weights.n} weights for {self.graph.n} vertices")
        if self.problem not in PRESETS:
            raise ContractError(f"unknown problem {self.problem!r}; choose from {sorted(PRESETS)}")
        preset = PRESETS[self.problem]
        if self.w is None:
            self.w = preset.w
        elif self.w != preset.w:
            raise ContractError(f"problem {self.problem} fixes w = {preset.w}, got {self.w}")
        self.extra = tuple(self.extra)
        for tok in self.extra:
            parse_factor(tok)

    def automaton(self):
        return PRESETS[self.problem].automaton([parse_factor(t) for t in self.extra])

    def spec(self):
        return ProblemSpec.preset(self.problem, self.extra, self.w)


@dataclass
class SolveReport:
    status: str
    solution: object = None
    weight: object = None
    k: int = None
    ell: int = None
    verification: object = None
    stats: dict = field(default_factory=dict)
    timings: dict = field(default_factory=dict)

    def lines(self):
        from .formats import format_fraction
        out = [f"status {self.status}"]
        if self.status == OPTIMAL:
            out.append(f"weight {format_fraction(self.weight)}")
            verts = []
            v, m = 0, self.solution
            while m:
                if m & 1:
                    verts.append(str(v + 1))
                m >>= 1
                v += 1
            out.append("solution" + ("" if not verts else " " + " ".join(verts)))
        return out


def propagate_families(host, T, families):
    """Families on the normalized bags: intersect the traces of every original bag covering them.

    The result is memoized per normalized bag, so nodes with equal bags share
    one set object.
    """
    memo = {}
    out = []
    for bag in host.bags:
        fam = memo.get(bag)
        if fam is None:
            fam = None
            for orig, F in zip(T.bags, families):
                if bag & ~orig:
                    continue
                traces = {Y & bag for Y in F}
                fam = traces if fam is None else fam & traces
            if fam is None:
                raise ContractError(f"normalized bag {bag:#x} lies in no original bag")
            memo[bag] = fam
        out.append(fam)
    return out


def bag_families(G, weights, T, k, w, A, mode):
    """Candidate family for each bag of T, enumerated once per distinct bag."""
    mis = maximal_independent_sets(G)
    memo = {}
    out = []
    for bag in T.bags:
        if bag not in memo:
            memo[bag] = set(enumerate_bag_family(G, weights, bag, k, w, A, mode, mis=mis))
        out.append(memo[bag])
    return out


def solve_pipeline(inst, verify=True, keep_tables=False):
    G, weights = inst.graph, inst.weights
    clock = time.perf_counter
    timings = {}
    t0 = clock()
    T = inst.decomposition
    if T is None:
        T = acquire_decomposition(G, inst.td_source)
    measured = mu_width(G, T)
    timings["decomposition"] = clock() - t0
    if inst.k is not None and measured > inst.k:
        return SolveReport(MU_EXCEEDED, k=measured, timings=timings)
    k = measured if inst.k is None else inst.k
    ell = ell_bound(k, inst.w) if inst.ell is None else inst.ell
    A = inst.automaton()

    t0 = clock()
    families = bag_families(G, weights, T, k, inst.w, A, inst.family_mode)
    timings["families"] = clock() - t0
    t0 = clock()
    host = make_supernice(G, T, ell)
    node_families = propagate_families(host, T, families)
    timings["normalize"] = clock() - t0
    t0 = clock()
    result = solve(G, weights, host, node_families, A, inst.w, ell, inst.drop_policy,
                   keep_tables=keep_tables)
    timings["dp"] = clock() - t0

    stats = {"nodes": len(host.bags), "family_sizes": [len(F) for F in families],
             "dp": result.summary()}
    if keep_tables:
        stats["host"] = host
        stats["node_families"] = node_families
        stats["tables"] = result.tables
    if not result.feasible:
        return SolveReport(INFEASIBLE, k=k, ell=ell, stats=stats, timings=timings)
    check = None
    if verify:
        check = feasibility_check(G, weights, inst.spec(), result.solution, host, node_families)
        if check.weight != result.weight:
            check.report.add("weight", result.weight, f"recomputed {check.weight}")
    return SolveReport(OPTIMAL, result.solution, result.weight, k, ell, check, stats, timings)
