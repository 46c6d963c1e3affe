"""Randomized cross-validation suites run by ``imtw selfcheck``.

Each suite draws instances from one seeded stream and stops at the first
failure, which it reports with a reproducer (the instance in file formats).
"""

import random
from dataclasses import dataclass, field

from .automata import PRESETS, accepts
from .formats import emit_gr, emit_weights
from .generators import random_decomposition, random_instance
from .graph import VertexWeights, induced_subgraph, treewidth_exact
from .inner import build_inner, ell_bound, verify_inner
from .oracle import PRESET_CHECKERS, ProblemSpec, brute_force_optimal
from .pipeline import Instance, OPTIMAL, solve_pipeline
from .signatures import ALL, BOUNDED, enumerate_bag_family
from .treedec import binarize, make_supernice, mu_width


@dataclass
class SuiteResult:
    name: str
    passed: int = 0
    failed: int = 0
    witness: str = ""
    log: list = field(default_factory=list)

    def line(self):
        verdict = "PASS" if not self.failed else "FAIL"
        return f"{verdict} {self.name}: {self.passed} passed, {self.failed} failed"


def _reproducer(G, W, note):
    return f"c {note}\n" + emit_gr(G) + "c weights\n" + emit_weights(W)


def suite_oracle(rng, budget, res):
    for i in range(budget):
        G, W = random_instance(rng, 8)
        problem = rng.choice(sorted(PRESETS))
        inst = Instance(G, W, problem)
        rep = solve_pipeline(inst)
        best = brute_force_optimal(G, W, inst.spec())
        want = None if best is None else best[1]
        got = rep.weight if rep.status == OPTIMAL else None
        ok = got == want and (rep.verification is None or rep.verification.ok)
        if not ok:
            res.failed += 1
            res.witness = _reproducer(G, W, f"{problem}: solver {got}, oracle {want}")
            return
        res.passed += 1


def suite_automata(rng, budget, res):
    for i in range(budget):
        G, _ = random_instance(rng, 8)
        name = rng.choice(sorted(PRESETS))
        A = PRESETS[name].automaton()
        w, check = PRESET_CHECKERS[name]
        T = binarize(random_decomposition(rng, G, pad=0.3))
        if accepts(A, G, T) != check(G):
            res.failed += 1
            res.witness = _reproducer(G, _unit(G), f"automaton {name} disagrees with its checker")
            return
        res.passed += 1


def suite_families(rng, budget, res):
    for i in range(budget):
        G, W = random_instance(rng, 7)
        name = rng.choice(["mwis", "forest", "tree"])
        spec = ProblemSpec.preset(name)
        best = brute_force_optimal(G, W, spec)
        if best is None:
            res.passed += 1
            continue
        X = best[0]
        T = random_decomposition(rng, G)
        k = mu_width(G, T)
        A = PRESETS[name].automaton()
        for B in set(T.bags):
            for mode in (BOUNDED, ALL):
                if X & B not in enumerate_bag_family(G, W, B, k, spec.w, A, mode):
                    res.failed += 1
                    res.witness = _reproducer(G, W, f"{name} family ({mode}) misses X* at bag {B:#x}")
                    return
        res.passed += 1


def suite_inner(rng, budget, res):
    for i in range(budget):
        G, _ = random_instance(rng, 8)
        w = rng.randint(0, 2)
        X = rng.getrandbits(max(G.n, 1)) & G.vertices
        if treewidth_exact(induced_subgraph(G, X)) > w:
            res.passed += 1
            continue
        T = random_decomposition(rng, G)
        ell = ell_bound(mu_width(G, T), w)
        host = make_supernice(G, T, ell)
        part, inner = build_inner(G, host, X, w, ell)
        rep = verify_inner(G, host, part, inner, ell)
        if not rep.ok:
            res.failed += 1
            res.witness = _reproducer(G, _unit(G), f"inner decomposition of {X:#x}, w={w}: {rep.text()}")
            return
        res.passed += 1


def _unit(G):
    return VertexWeights.unit(G.n)


SUITES = (
    ("oracle-equivalence", suite_oracle),
    ("automaton-agreement", suite_automata),
    ("family-completeness", suite_families),
    ("inner-decomposition", suite_inner),
)


def selfcheck(seed=0, budget=20, suites=None):
    """Run the suites on streams derived from ``seed``; one ``SuiteResult`` each."""
    out = []
    for name, fn in SUITES:
        if suites and name not in suites:
            continue
        rng = random.Random(f"{seed}:{name}")
        res = SuiteResult(name)
        fn(rng, budget, res)
        out.append(res)
    return out

