import os
import subprocess
import sys

import pytest
from hypothesis import given, strategies as st

from conftest import graphs
from imtw import _purekernels as pure
from imtw import kernels

ck = pytest.importorskip("imtw._ckernels")


def _costs(rng_bits, m):
    return [((s * 2654435761) ^ rng_bits) % 5 for s in range(1 << m)]


@given(graphs(max_n=10))
def test_mis_backends_agree(G):
    cap = 10 ** 6
    assert ck.maximal_independent_sets(G.adj, G.vertices, cap) == \
        pure.maximal_independent_sets(G.adj, G.vertices, cap)


@given(graphs(max_n=9))
def test_induced_matching_backends_agree(G):
    a = ck.max_induced_subset(G.adj, G.edges)
    b = pure.max_induced_subset(G.adj, G.edges)
    assert len(a) == len(b)
    assert a == sorted(a) and b == sorted(b)


def _bag_cost_along(ladj, order, costs):
    m = len(ladj)
    worst = -1
    gone = 0
    for v in order:
        rest = gone
        comp = front = 1 << v
        while front:
            f = front & -front
            front ^= f
            nb = ladj[f.bit_length() - 1] & rest & ~comp
            comp |= nb
            front |= nb
        q = 0
        for u in range(m):
            if (comp >> u) & 1:
                q |= ladj[u]
        bag = (q & ~rest & ~(1 << v)) | (1 << v)
        cost = bin(bag).count("1") - 1 if costs is None else costs[bag]
        worst = max(worst, cost)
        gone |= 1 << v
    return worst


@given(graphs(max_n=8), st.booleans(), st.integers(0, 2 ** 20))
def test_elimination_backends_agree(G, weighted, bits):
    costs = _costs(bits, G.n) if weighted else None
    va, oa = ck.elimination_dp(G.adj, costs)
    vb, ob = pure.elimination_dp(G.adj, costs)
    assert va == vb
    assert sorted(oa) == sorted(ob) == list(range(G.n))
    if G.n:
        assert _bag_cost_along(G.adj, oa, costs) == va
        assert _bag_cost_along(G.adj, ob, costs) == vb


def test_mis_cap_in_both_backends():
    # an edgeless graph has one maximal independent set, a matching on 6 has 8
    matching = [0b10, 0b01, 0b1000, 0b0100, 0b100000, 0b010000]
    for mod in (ck, pure):
        assert mod.maximal_independent_sets([0] * 6, 0b111111, 0) is None
        assert mod.maximal_independent_sets(matching, 0b111111, 7) is None
        assert len(mod.maximal_independent_sets(matching, 0b111111, 8)) == 8


def test_dispatch_uses_compiled_backend_by_default():
    if os.environ.get("IMTW_PURE", "") not in ("", "0"):
        pytest.skip("pure backend forced by the environment")
    assert kernels.compiled is not None
    assert kernels.BACKEND == ck.BACKEND


def test_environment_forces_the_pure_backend():
    code = "from imtw import kernels; print(kernels.BACKEND, kernels.compiled is None)"
    env = dict(os.environ, IMTW_PURE="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True)
    assert out.stdout.split() == [pure.BACKEND, "True"]


def test_wide_inputs_fall_back_to_pure():
    adj = [0] * 70
    got = kernels.maximal_independent_sets(adj, (1 << 70) - 1, 10)
    assert got == [(1 << 70) - 1]
