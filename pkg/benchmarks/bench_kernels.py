"""Compiled vs pure-Python kernels.

Times the three bitset kernels on seeded random graphs with both backends,
then times the full solver twice in subprocesses, once with ``IMTW_PURE=1``.

    python3 benchmarks/bench_kernels.py [--seed S] [--repeat R]
"""

import argparse
import os
import random
import subprocess
import sys
import timeit

from imtw import _purekernels as pure
from imtw.generators import random_graph

try:
    from imtw import _ckernels as compiled
except ImportError:
    compiled = None


def kernel_cases(rng):
    """(label, call, summary) triples; ``summary`` reduces a result to what must agree."""
    cases = []
    for n, p in ((30, 0.3), (40, 0.5), (56, 0.7)):
        G = random_graph(rng, n, p)
        cases.append((f"maximal_independent_sets n={n} p={p}",
                      lambda m, G=G: m.maximal_independent_sets(G.adj, G.vertices, 10 ** 7), len))
    for n, p in ((10, 0.4), (12, 0.4), (14, 0.3)):
        G = random_graph(rng, n, p)
        cases.append((f"max_induced_subset n={n} m={G.m}",
                      lambda m, G=G: m.max_induced_subset(G.adj, G.edges), len))
    for n, p in ((10, 0.4), (13, 0.4), (15, 0.3)):
        G = random_graph(rng, n, p)
        cases.append((f"elimination_dp n={n}", lambda m, G=G: m.elimination_dp(G.adj, None),
                      lambda r: r[0]))
    return cases


SOLVE_SNIPPET = """
import random, time
from imtw import kernels
from imtw.generators import random_instance
from imtw.pipeline import Instance, solve_pipeline
rng = random.Random({seed})
start = time.perf_counter()
for _ in range(40):
    G, W = random_instance(rng, 10, n_min=8)
    solve_pipeline(Instance(G, W, "forest"))
print(kernels.BACKEND, time.perf_counter() - start)
"""


def solve_timing(seed, pure_backend):
    env = dict(os.environ, IMTW_PURE="1" if pure_backend else "0")
    out = subprocess.run([sys.executable, "-c", SOLVE_SNIPPET.format(seed=seed)], env=env,
                         capture_output=True, text=True, check=True)
    backend, seconds = out.stdout.split()
    return backend, float(seconds)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    if compiled is None:
        print("compiled kernels not built; run `pip install -e . --no-build-isolation` first")
        return 1

    print(f"{'kernel':<44}{'pure ms':>10}{'compiled ms':>13}{'speedup':>9}")
    for label, call, summary in kernel_cases(random.Random(args.seed)):
        # ties may be broken differently, so compare the size or value only
        if summary(call(pure)) != summary(call(compiled)):
            print(f"{label}: backends disagree")
            return 1
        t_pure = min(timeit.repeat(lambda: call(pure), number=1, repeat=args.repeat))
        t_comp = min(timeit.repeat(lambda: call(compiled), number=1, repeat=args.repeat))
        print(f"{label:<44}{t_pure * 1e3:>10.2f}{t_comp * 1e3:>13.2f}{t_pure / t_comp:>8.1f}x")

    print()
    for pure_backend in (True, False):
        backend, seconds = solve_timing(args.seed, pure_backend)
        print(f"solver, 40 forest instances, {backend} kernels: {seconds:.2f}s")
    return 0


if __name__ == "__main__":
    sys.exit(main())
