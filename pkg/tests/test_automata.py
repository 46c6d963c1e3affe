import random

import pytest
from hypothesis import given, strategies as st

import brute
from conftest import complete, cycle, graphs, path, two_k2
from imtw.automata import (PRESETS, Connected, DegreeCap, DegreeExact, Edgeless, Forest, Product,
                           SizeMod, TrueAutomaton, accepts, catalogue, describe_state,
                           neighborhood_state, parse_factor, run)
from imtw.bits import popcount
from imtw.errors import ContractError
from imtw.generators import random_decomposition
from imtw.graph import Graph, VertexWeights, induced_subgraph, treewidth_exact
from imtw.oracle import (PRESET_CHECKERS, always, degree_exactly, is_connected, is_edgeless,
                         is_forest, max_degree_le, size_mod)
from imtw.pipeline import Instance, solve_pipeline
from imtw.treedec import TreeDecomposition, binarize, trivial_decomposition


def binary(G, seed=0, pad=0.3):
    return binarize(random_decomposition(random.Random(seed), G, pad=pad))


FACTORS = [
    (Edgeless(), is_edgeless),
    (Forest(), is_forest),
    (Connected(), is_connected),
    (DegreeCap(2), max_degree_le(2)),
    (DegreeExact(2), degree_exactly(2)),
    (SizeMod(1, 3), size_mod(1, 3)),
    (TrueAutomaton(), always),
]


def test_edgeless_examples():
    assert accepts(Edgeless(), Graph(2), binary(Graph(2)))
    assert not accepts(Edgeless(), complete(2), binary(complete(2)))


def test_forest_examples():
    assert not accepts(Forest(), complete(3), binary(complete(3)))
    assert accepts(Forest(), path(3), binary(path(3)))


def test_connected_examples():
    assert accepts(Connected(), Graph(1), binary(Graph(1)))
    assert not accepts(Connected(), two_k2(), binary(two_k2()))
    assert not accepts(Connected(), Graph(0), binarize(TreeDecomposition([0])))


def test_cycle_preset_examples():
    A = PRESETS["cycle"].automaton()
    assert accepts(A, cycle(6), binary(cycle(6)))
    assert not accepts(A, path(6), binary(path(6)))


def test_run_rejects_wide_bags():
    A = Edgeless()
    A.width = 1
    with pytest.raises(ContractError):
        run(A, complete(3), binarize(trivial_decomposition(complete(3))))


def test_neighborhood_state_examples():
    A = Edgeless()
    G = Graph(2, [(0, 1)])
    q = neighborhood_state(A, Graph(1), 0, 0)
    assert A.accepting(q)
    assert not A.accepting(neighborhood_state(A, G, 0, 0b10))
    # star center 0 with two nonadjacent neighbors: one forest component
    S = Graph(3, [(0, 1), (0, 2)])
    q = neighborhood_state(Forest(), S, 0, 0b110)
    assert Forest().accepting(q)
    bag, _, blocks = q
    assert bag == 0b110 and len(blocks) == 1


@pytest.mark.parametrize("name,G,want", [
    ("mwis", cycle(5), 2),
    ("cycle", cycle(6), 6),
    ("forest", complete(4), 2),
])
def test_preset_optimum_examples(name, G, want):
    W = VertexWeights.unit(G.n)
    assert brute.optimum_weight(G, W, name) == want
    assert solve_pipeline(Instance(G, W, name)).weight == want


@given(graphs(max_n=8), st.integers(0, 10 ** 6))
def test_factors_agree_with_direct_checkers(G, seed):
    for A, check in FACTORS:
        assert accepts(A, G, binary(G, seed)) == check(G), A.name


@given(graphs(max_n=8), st.integers(0, 10 ** 6))
def test_presets_agree_with_checkers_on_three_decompositions(G, seed):
    decs = [binary(G, seed + i, pad=0.2 * i) for i in range(3)]
    decs.append(binarize(trivial_decomposition(G)))
    for name, preset in PRESETS.items():
        A = preset.automaton()
        _, check = PRESET_CHECKERS[name]
        answers = {accepts(A, G, T) for T in decs}
        assert answers == {check(G)}, name
        # presets only accept graphs within their treewidth bound
        if check(G):
            assert treewidth_exact(G) <= preset.w
        assert brute.property_holds(name, G, G.vertices) == check(G)


@given(graphs(max_n=7), st.integers(0, 10 ** 6))
def test_product_is_conjunction(G, seed):
    T = binary(G, seed)
    parts = [Forest(), Connected(), DegreeCap(1)]
    assert accepts(Product(*parts), G, T) == all(accepts(p, G, T) for p in parts)


def _states_by_node(A, G, T):
    out = {}
    for t in T.postorder():
        kids = T.children[t]
        bag = T.bags[t]
        if not kids:
            out[t] = A.leaf(G, bag)
        elif len(kids) == 1:
            out[t] = A.step(G, out[kids[0]], T.bags[kids[0]], bag)
        else:
            a, b = kids
            out[t] = A.join(G, out[a], out[b], T.bags[a], T.bags[b], bag)
    return out


@given(st.integers(0, 10 ** 6))
def test_equal_encodings_never_diverge(seed):
    rng = random.Random(seed)
    n = rng.randint(2, 7)
    G = Graph(n, [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < 0.4])
    for A, _ in FACTORS + [(PRESETS["tree"].automaton(), None)]:
        seen = {}
        for i in range(4):
            T = binary(G, seed + i)
            for t, q in _states_by_node(A, G, T).items():
                seen.setdefault((A.encode(q), T.bags[t]), []).append(q)
        for (enc, bag), qs in seen.items():
            target = rng.getrandbits(n) & G.vertices
            results = {A.encode(A.step(G, q, bag, target)) for q in qs}
            assert len(results) == 1
            finals = {A.accepting(A.step(G, q, bag, 0)) for q in qs}
            assert len(finals) == 1


@given(st.integers(0, 10 ** 6))
def test_state_bound_covers_observed_states(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 7)
    G = Graph(n, [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < 0.4])
    for A, _ in FACTORS:
        per_bag = {}
        width = 0
        for i in range(3):
            T = binary(G, seed + i)
            width = max(width, max(popcount(b) for b in T.bags) - 1)
            for t, q in _states_by_node(A, G, T).items():
                per_bag.setdefault(T.bags[t], set()).add(A.encode(q))
        bound = A.state_bound(max(width, 0))
        if bound is not None:
            assert max(len(s) for s in per_bag.values()) <= bound, A.name


def test_empty_graph_conventions():
    T = binarize(TreeDecomposition([0]))
    E = Graph(0)
    got = {name: accepts(p.automaton(), E, T) for name, p in PRESETS.items()}
    assert got == {"mwis": True, "forest": True, "tree": False, "path": False, "cycle": False}
    assert got == {name: chk(E) for name, (_, chk) in PRESET_CHECKERS.items()}


def test_parse_factor_tokens():
    assert isinstance(parse_factor("degree-cap:3"), DegreeCap)
    assert parse_factor("size-mod:1:2").r == 2
    with pytest.raises(ContractError):
        parse_factor("degree-cap")
    with pytest.raises(ContractError):
        parse_factor("size-mod:a:2")
    with pytest.raises(ContractError):
        parse_factor("colorful")


def test_preset_with_extra_factor():
    A = PRESETS["path"].automaton([SizeMod(0, 2)])
    assert accepts(A, path(4), binary(path(4)))
    assert not accepts(A, path(3), binary(path(3)))


def test_catalogue_and_description():
    cat = catalogue()
    assert set(cat["presets"]) == {"mwis", "forest", "tree", "path", "cycle"}
    q = Forest().leaf(path(2), 0b11)
    assert "bag=[0, 1]" in describe_state(q)


def test_product_rejects_foreign_factors():
    with pytest.raises(ContractError):
        Product()
    with pytest.raises(ContractError):
        Product(object())
    with pytest.raises(ContractError):
        SizeMod(0, 0)


@given(graphs(max_n=7), st.integers(0, 127))
def test_induced_subgraph_runs_match_checkers(G, X):
    X &= G.vertices
    H = induced_subgraph(G, X)
    T = binarize(random_decomposition(random.Random(X), H))
    assert accepts(Forest(), H, T) == is_forest(H)
