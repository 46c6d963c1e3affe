import os
import sys

import pytest
from hypothesis import HealthCheck, settings, strategies as st

sys.path.insert(0, os.path.dirname(__file__))

from imtw.graph import Graph, VertexWeights  # noqa: E402

settings.register_profile(
    "default", max_examples=60, deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def complete(n):
    return Graph(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def cycle(n):
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def path(n):
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def star(leaves):
    return Graph(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def two_k2():
    return Graph(4, [(0, 1), (2, 3)])


def k33():
    return Graph(6, [(a, b) for a in range(3) for b in range(3, 6)])


@st.composite
def graphs(draw, max_n=8, min_n=0):
    n = draw(st.integers(min_n, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    chosen = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph(n, [e for e, keep in zip(pairs, chosen) if keep])


@st.composite
def weighted_graphs(draw, max_n=8, min_n=1):
    G = draw(graphs(max_n, min_n))
    nums = draw(st.lists(st.integers(-10, 10), min_size=G.n, max_size=G.n))
    dens = draw(st.lists(st.sampled_from([1, 2, 3]), min_size=G.n, max_size=G.n))
    from fractions import Fraction
    return G, VertexWeights([Fraction(a, b) for a, b in zip(nums, dens)])


def subsets_of(G):
    return st.integers(0, (1 << G.n) - 1)


# ----------------------------------------------- acceptance summary lines

_ACCEPTANCE = []


@pytest.fixture
def verdict():
    """Record one pass/fail line for an acceptance criterion."""
    def record(number, name, ok, detail):
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number} {name}: {detail}"
        _ACCEPTANCE.append(line)
        print(line)
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE, key=lambda s: int(s.split()[2])):
            terminalreporter.write_line(line)
