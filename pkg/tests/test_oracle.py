import random
from fractions import Fraction

import networkx as nx
import pytest
from hypothesis import given, strategies as st

import brute
from conftest import complete, cycle, graphs, path, two_k2, weighted_graphs
from imtw.bits import mask_of
from imtw.errors import ContractError, ResourceLimitError
from imtw.graph import Graph, VertexWeights, lex_key
from imtw.oracle import (PRESET_CHECKERS, ProblemSpec, all_feasible, brute_force_optimal,
                         checker_for_token, direct_checkers, feasibility_check, is_connected,
                         is_cycle, is_edgeless, is_forest, is_path, is_tree)


def test_optimum_examples():
    assert brute_force_optimal(complete(2), VertexWeights([5, 3]), ProblemSpec.preset("mwis")) == (1, 5)
    assert brute_force_optimal(cycle(5), VertexWeights.unit(5), ProblemSpec.preset("mwis")) \
        == (mask_of([2, 4]), 2)
    assert brute_force_optimal(cycle(4), VertexWeights.unit(4), ProblemSpec.preset("forest")) \
        == (mask_of([1, 2, 3]), 3)


def test_infeasible_instance_returns_none():
    assert brute_force_optimal(path(3), VertexWeights.unit(3), ProblemSpec.preset("cycle")) is None


def test_guard():
    with pytest.raises(ResourceLimitError):
        brute_force_optimal(Graph(15), VertexWeights.unit(15), ProblemSpec.preset("mwis"))


def test_checker_examples():
    assert is_cycle(cycle(6)) and not is_cycle(path(6))
    assert is_forest(two_k2())
    assert is_path(Graph(1))
    assert not is_path(Graph(0)) and not is_connected(Graph(0)) and not is_cycle(Graph(0))
    assert is_forest(Graph(0)) and is_edgeless(Graph(0))


def test_checker_catalogue_and_tokens():
    cat = direct_checkers()
    assert cat["max_degree_le"](1)(two_k2())
    assert not cat["degree_exactly"](2)(path(3))
    assert checker_for_token("size-mod:1:2")(path(3))
    with pytest.raises(ContractError):
        checker_for_token("degree-cap:x")
    with pytest.raises(ContractError):
        checker_for_token("colorful")


def _nx_view(G):
    return brute.as_nx(G, G.vertices)


@given(graphs(max_n=8))
def test_checkers_agree_with_networkx(G):
    H = _nx_view(G)
    nonempty = H.number_of_nodes() > 0
    assert is_edgeless(G) == (H.number_of_edges() == 0)
    assert is_forest(G) == (nx.is_forest(H) if nonempty else True)
    assert is_connected(G) == (nonempty and nx.is_connected(H))
    assert is_tree(G) == (nonempty and nx.is_tree(H))
    for name, (_, check) in PRESET_CHECKERS.items():
        assert check(G) == brute.property_holds(name, G, G.vertices)


@given(graphs(max_n=8), st.integers(0, 255))
def test_checkers_agree_on_induced_subgraphs(G, X):
    from imtw.graph import induced_subgraph
    X &= G.vertices
    H = induced_subgraph(G, X)
    for name, (_, check) in PRESET_CHECKERS.items():
        assert check(H) == brute.property_holds(name, G, X)


@given(weighted_graphs(max_n=7), st.sampled_from(sorted(PRESET_CHECKERS)))
def test_optimum_matches_independent_search(GW, name):
    G, W = GW
    spec = ProblemSpec.preset(name)
    best = brute_force_optimal(G, W, spec)
    want = brute.optimum_weight(G, W, name)
    if want is None:
        assert best is None
        return
    X, wt = best
    assert wt == want == W.total(X)
    # the lex rule picks exactly one maximizer
    ties = [Y for Y in all_feasible(G, spec) if W.total(Y) == wt]
    assert X in ties
    assert max(ties, key=lambda Y: lex_key(Y, W.rank)) == X
    assert len({lex_key(Y, W.rank) for Y in ties}) == len(ties)


@given(weighted_graphs(max_n=6), st.sampled_from(sorted(PRESET_CHECKERS)), st.integers(0, 10 ** 6))
def test_feasibility_invariant_under_order_preserving_relabeling(GW, name, seed):
    G, W = GW
    rng = random.Random(seed)
    perm = list(range(G.n))
    rng.shuffle(perm)
    H = Graph(G.n, [(perm[u], perm[v]) for u, v in G.edges])
    # ranks follow the relabeling, so the vertex order is preserved
    order = [0] * G.n
    for v in range(G.n):
        order[W.rank[v]] = perm[v]
    W2 = VertexWeights([W[perm.index(v)] for v in range(G.n)], order)
    spec = ProblemSpec.preset(name)
    for X in range(1 << G.n):
        Y = mask_of(perm[v] for v in range(G.n) if (X >> v) & 1)
        assert feasibility_check(G, W, spec, X).ok == feasibility_check(H, W2, spec, Y).ok
    a = brute_force_optimal(G, W, spec)
    b = brute_force_optimal(H, W2, spec)
    if a is None:
        assert b is None
    else:
        assert b[1] == a[1]
        assert b[0] == mask_of(perm[v] for v in range(G.n) if (a[0] >> v) & 1)


def test_feasibility_failures():
    rep = feasibility_check(complete(4), VertexWeights.unit(4), ProblemSpec.preset("forest"), 0b1111)
    assert not rep.ok and "checker" in rep.report.conditions()
    assert "treewidth" in rep.report.conditions()
    rep = feasibility_check(cycle(4), VertexWeights.unit(4), ProblemSpec.preset("cycle"), 0)
    assert not rep.ok
    rep = feasibility_check(path(2), VertexWeights.unit(2), ProblemSpec.preset("mwis"), 1 << 4)
    assert rep.report.conditions() == {"range"}


def test_feasibility_reports_weight_and_family_misses():
    G = path(3)
    W = VertexWeights([Fraction(1, 2), 1, Fraction(-3, 2)])
    rep = feasibility_check(G, W, ProblemSpec.preset("path"), 0b111)
    assert rep.ok and rep.weight == 0

    class Host:
        bags = [0b011, 0b110]
    rep = feasibility_check(G, W, ProblemSpec.preset("path"), 0b111, Host, [{0b011}, {0b010}])
    assert "family" in rep.report.conditions()


def test_empty_set_conventions():
    G = cycle(3)
    W = VertexWeights([-1, -1, -1])
    got = {name: feasibility_check(G, W, ProblemSpec.preset(name), 0).ok for name in PRESET_CHECKERS}
    assert got == {"mwis": True, "forest": True, "tree": False, "path": False, "cycle": False}


def test_preset_spec_checks():
    with pytest.raises(ContractError):
        ProblemSpec.preset("clique")
    with pytest.raises(ContractError):
        ProblemSpec.preset("forest", w=2)
    spec = ProblemSpec.preset("forest", extra=("degree-cap:1",))
    assert not spec.holds(path(3), 0b111) and spec.holds(path(3), 0b011)


@given(graphs(max_n=8))
def test_preset_properties_imply_their_treewidth_bound(G):
    from imtw.graph import treewidth_exact
    for name, (w, check) in PRESET_CHECKERS.items():
        if check(G):
            assert treewidth_exact(G) <= w
