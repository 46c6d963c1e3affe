import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from conftest import complete, cycle, graphs, path
from imtw.automata import PRESETS, DegreeCap, Edgeless, SizeMod, TrueAutomaton
from imtw.bits import iter_members, mask_of, popcount
from imtw.errors import ContractError
from imtw.generators import random_decomposition, random_instance
from imtw.graph import Graph, VertexWeights, induced_subgraph, treewidth_exact
from imtw.oracle import ProblemSpec, brute_force_optimal
from imtw.signatures import (ALL, BOUNDED, BasicSignature, check_signature, classify_dangling,
                             construct_signature_for, cover_bound, dangling_vertices,
                             enumerate_bag_family, enumerate_bag_family_reference, kill_bound,
                             mis_projections, suffix_family, suffix_state_count)
from imtw.treedec import mu_width, trivial_decomposition


def unit(n):
    return VertexWeights.unit(n)


def test_bounds():
    assert cover_bound(1, 0) == 2 and kill_bound(1, 0) == 1
    assert cover_bound(2, 1) == 8 and kill_bound(2, 1) == 4


def test_mis_projections_examples():
    C4 = cycle(4)
    assert mis_projections(C4, 0b0011) == [0b0001, 0b0010]
    assert mis_projections(C4, 0) == [0]
    assert mis_projections(Graph(3), 0b101) == [0b101]


def test_dangling_vertices_example():
    G = path(4)  # 0-1-2-3
    sig = BasicSignature(C=0b0001, S=0b1101, D=0b1000, B=0b1111)
    # 0 is covered, 2 is next to D=3, 3 stays dangling
    assert dangling_vertices(sig, G) == 0b1000


def test_classify_dangling_splits_by_sign_and_trace():
    G = Graph(5, [(0, 1), (0, 2)])
    W = VertexWeights([0, 3, -1, 2, 1])
    groups = classify_dangling(G, 0b11110, 0b00001, Edgeless(), W, with_state=False)
    as_sets = sorted(sorted(g) for g in groups)
    assert as_sets == [[1], [2], [3, 4]]
    # inside a group the order is ascending by weight
    assert [4, 3] in groups


def test_suffix_family_windows():
    a, b, c, d = 0, 1, 2, 3
    fam = suffix_family([a, b, c, d], 1, 0)
    assert sorted(popcount(m) for m in fam) == [0, 1, 3, 4]
    assert mask_of([d]) in fam and mask_of([b, c, d]) in fam
    assert len(suffix_family([a, b, c, d], 1, 0, ALL)) == 5
    assert suffix_family([], 0, 0) == [0]


@given(st.integers(0, 9), st.integers(0, 4), st.integers(0, 3))
def test_suffix_family_only_suffixes(n, qbound, w):
    group = list(range(n))
    fam = suffix_family(group, qbound, w)
    for m in fam:
        size = popcount(m)
        assert m == mask_of(group[n - size:])
        assert size <= max(qbound, w + 1) or size >= n - qbound
    assert len(set(fam)) == len(fam)


def test_family_examples_contain_the_optimum():
    cases = [
        ("mwis", cycle(5), unit(5), mask_of([2, 4])),
        ("mwis", complete(2), VertexWeights([-1, -2]), 0),
        ("forest", cycle(4), unit(4), mask_of([1, 2, 3])),
    ]
    for name, G, W, want in cases:
        spec = ProblemSpec.preset(name)
        assert brute_force_optimal(G, W, spec)[0] == want
        T = trivial_decomposition(G)
        k = mu_width(G, T)
        A = PRESETS[name].automaton()
        for mode in (BOUNDED, ALL):
            assert want in enumerate_bag_family(G, W, G.vertices, k, spec.w, A, mode)


def test_unknown_mode_rejected():
    with pytest.raises(ContractError):
        enumerate_bag_family(path(2), unit(2), 0b11, 1, 0, Edgeless(), mode="some")


def test_family_members_are_subsets_with_small_treewidth():
    G = cycle(5)
    fam = enumerate_bag_family(G, unit(5), G.vertices, 1, 1, PRESETS["forest"].automaton())
    assert fam == sorted(set(fam))
    for Y in fam:
        assert Y & ~G.vertices == 0
        assert treewidth_exact(induced_subgraph(G, Y)) <= 1


def _tiny(seed, n_max=5):
    rng = random.Random(seed)
    G, W = random_instance(rng, n_max)
    T = random_decomposition(rng, G)
    return rng, G, W, T


@settings(max_examples=25)
@given(st.integers(0, 10 ** 6), st.sampled_from(["mwis", "forest"]),
       st.sampled_from([BOUNDED, ALL]))
def test_fast_enumerator_matches_reference(seed, name, mode):
    rng, G, W, T = _tiny(seed, 5)
    k = min(mu_width(G, T), 1)
    A = PRESETS[name].automaton()
    w = PRESETS[name].w
    B = rng.choice(T.bags)
    fast = enumerate_bag_family(G, W, B, k, w, A, mode)
    ref = enumerate_bag_family_reference(G, W, B, k, w, A, mode)
    assert fast == ref


@given(st.integers(0, 10 ** 6), st.sampled_from(["mwis", "forest", "tree", "path"]))
def test_family_contains_the_optimum_at_every_bag(seed, name):
    rng, G, W, T = _tiny(seed, 7)
    spec = ProblemSpec.preset(name)
    best = brute_force_optimal(G, W, spec)
    if best is None:
        return
    X = best[0]
    k = mu_width(G, T)
    A = PRESETS[name].automaton()
    for B in set(T.bags):
        for mode in (BOUNDED, ALL):
            assert X & B in enumerate_bag_family(G, W, B, k, spec.w, A, mode)


@given(st.integers(0, 10 ** 6))
def test_bounded_family_sits_inside_the_all_family(seed):
    rng, G, W, T = _tiny(seed, 7)
    A = PRESETS["mwis"].automaton()
    k = mu_width(G, T)
    for B in set(T.bags):
        small = set(enumerate_bag_family(G, W, B, k, 0, A, BOUNDED))
        big = set(enumerate_bag_family(G, W, B, k, 0, A, ALL))
        assert small <= big
        assert all(Y & ~B == 0 for Y in big)


def test_signature_of_independent_set_on_path():
    G = path(5)
    X = mask_of([0, 2, 4])
    B = mask_of([1, 2, 3])
    sig = construct_signature_for(G, X, B, 1, 0)
    assert sig.C == 0
    assert check_signature(G, X, sig) == []
    assert X & B & ~sig.S == 0


def test_check_signature_reports_faults():
    G = path(3)
    X = 0b111
    bad = check_signature(G, X, BasicSignature(C=0, S=0b010, D=0b100, B=0b111))
    assert any(b.startswith("uncovered-edge") for b in bad)
    assert "solution-not-in-S" in bad
    bad = check_signature(G, 0b001, BasicSignature(C=0b100, S=0b101, D=0, B=0b111))
    assert "cover-outside-solution" in bad


@given(graphs(max_n=7, min_n=1), st.integers(0, 127), st.integers(0, 10 ** 6))
def test_constructed_signatures_are_valid(G, X, seed):
    X &= G.vertices
    tw = treewidth_exact(induced_subgraph(G, X))
    w = max(tw, 0)
    T = random_decomposition(random.Random(seed), G)
    k = mu_width(G, T)
    for B in set(T.bags):
        sig = construct_signature_for(G, X, B, k, w)
        assert check_signature(G, X, sig) == []
        assert popcount(sig.C) <= cover_bound(k, w)
        assert popcount(sig.D) <= kill_bound(k, w)
        U = dangling_vertices(sig, G)
        rest = X & ~sig.C
        # solution vertices of the bag outside the cover dangle, and nothing
        # that dangles touches the uncovered part of the solution
        assert (X & B) & ~sig.C & ~U == 0
        assert U & G.neighborhood(rest) == 0


@pytest.mark.parametrize("A", [Edgeless(), DegreeCap(1), SizeMod(0, 3), TrueAutomaton()])
def test_suffix_chain_stays_within_state_bound(A):
    rng = random.Random(11)
    for _ in range(40):
        n = rng.randint(2, 6)
        G = Graph(n, [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < 0.5])
        v = rng.randrange(n)
        trace = G.adj[v] & rng.getrandbits(n)
        count = suffix_state_count(A, G, v, trace)
        assert 1 <= count <= A.state_bound(popcount(trace))


def test_suffix_chain_examples():
    G = Graph(2, [(0, 1)])
    # hanging copies of a lone vertex: size mod 3 cycles through three values
    assert suffix_state_count(SizeMod(0, 3), Graph(1), 0, 0) == 3
    assert suffix_state_count(TrueAutomaton(), G, 1, 0b01) == 1
    # one adjacent copy already fails, and failure is absorbing
    assert suffix_state_count(Edgeless(), G, 1, 0b01) == 2


def test_negative_weight_vertices_group_apart():
    G = Graph(3)
    W = VertexWeights([Fraction(-1, 2), 1, 2])
    groups = classify_dangling(G, 0b111, 0, Edgeless(), W)
    assert sorted(map(sorted, groups)) == [[0], [1, 2]]


def test_dangling_vertices_set_arithmetic():
    G = Graph(4, [(1, 2)])
    assert dangling_vertices(BasicSignature(C=0b0001, S=0b1100, D=0b0010, B=0b1111), G) == 0b1000
    assert dangling_vertices(BasicSignature(C=0, S=0b1100, D=0, B=0b1111), G) == 0b1100
    assert dangling_vertices(BasicSignature(C=0, S=0b0100, D=0b0010, B=0b1111), G) == 0


@given(st.integers(0, 10 ** 6), st.sampled_from(["mwis", "forest", "tree"]))
def test_signatures_of_the_optimum_sandwich_it(seed, name):
    rng, G, W, T = _tiny(seed, 8)
    spec = ProblemSpec.preset(name)
    best = brute_force_optimal(G, W, spec)
    if best is None:
        return
    X = best[0]
    k = mu_width(G, T)
    for B in set(T.bags):
        sig = construct_signature_for(G, X, B, k, spec.w)
        CB = sig.C & B
        assert CB & ~X == 0
        assert (X & B) & ~(sig.S | CB) == 0
        assert (sig.S & ~sig.C) & G.neighborhood(sig.D) & X == 0
        for v in iter_members(dangling_vertices(sig, G)):
            assert G.adj[v] & X & ~sig.C == 0
