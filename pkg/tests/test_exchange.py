import itertools

import pytest
from hypothesis import given, strategies as st

from forestswap.errors import ContractError
from forestswap.exchange import (
    adjacent_k,
    adjacent_single,
    apply_double_swap,
    bfs_path,
    build_k_base_graph,
    build_multiset_fiber_graph,
    build_single_exchange_graph,
    double_swap_candidates,
    fiber_multisets,
    is_connected,
    is_k_tuple,
    k_tuples,
    multiset_key,
    ExchangeGraph,
)
from forestswap.graph import MultiGraph
from forestswap.matroid import enumerate_bases, is_base, rank
from forestswap.sweep import tight_graphs

from _oracles import (
    bf_bases,
    bf_components,
    bf_fiber,
    bf_k_tuples,
    bf_ordered_pairs,
    differ_by_double_swap,
)
from strategies import multigraphs

PAIR = MultiGraph(2, ((0, 1), (0, 1)))
TRIPLE = MultiGraph(2, ((0, 1), (0, 1), (0, 1)))
# two disjoint Hamiltonian paths of K4 (the complement of a star is a triangle)
P1, P2 = frozenset({0, 3, 5}), frozenset({1, 2, 4})


def test_rank_one_candidates():
    assert double_swap_candidates(PAIR, {0}, {1}, 0) == [1]


def test_identity_swap(k4):
    assert double_swap_candidates(k4, P1, P1, 0) == [0]


def test_swap_candidates_k4_match_brute_force(k4):
    got = double_swap_candidates(k4, P1, P2, 0)
    assert got
    expected = [d for d in P2 if is_base(k4, (P1 - {0}) | {d}) and is_base(k4, (P2 - {d}) | {0})]
    assert got == sorted(expected)


def test_swap_needs_b_in_first_base(k4):
    with pytest.raises(ContractError):
        double_swap_candidates(k4, P1, P2, 1)


@given(multigraphs(max_vertices=4, max_edges=7, loops=False), st.data())
def test_swap_candidates_property(g, data):
    bases = list(enumerate_bases(g))
    B = data.draw(st.sampled_from(bases))
    D = data.draw(st.sampled_from(bases))
    if not B:
        return
    b = data.draw(st.sampled_from(sorted(B)))
    for d in double_swap_candidates(g, B, D, b):
        assert is_base(g, (B - {b}) | {d}) and is_base(g, (D - {d}) | {b})


def test_apply_double_swap(doubled_triangle, k4):
    t = next(iter(k_tuples(doubled_triangle, 3)))
    assert apply_double_swap(doubled_triangle, t, 1, 1, min(t[1]), min(t[1])) == t
    # parallel copies are interchangeable between members
    i, j = next((i, j) for i, j in itertools.permutations(range(3), 2)
                if any(doubled_triangle.edges[a] == doubled_triangle.edges[b] for a in t[i] for b in t[j]))
    a, b = next((a, b) for a in t[i] for b in t[j] if doubled_triangle.edges[a] == doubled_triangle.edges[b])
    swapped = apply_double_swap(doubled_triangle, t, i, j, a, b)
    assert is_k_tuple(doubled_triangle, swapped, 3)
    d = double_swap_candidates(k4, P1, P2, 0)[0]
    first, second = apply_double_swap(k4, (P1, P2), 0, 1, 0, d)
    assert is_base(k4, first) and is_base(k4, second)


def test_apply_double_swap_rejects_invalid(k4):
    bad = next(d for d in P2 if d not in double_swap_candidates(k4, P1, P2, 0))
    with pytest.raises(ContractError):
        apply_double_swap(k4, (P1, P2), 0, 1, 0, bad)


def test_adjacency_predicates():
    a, b, c, d = (frozenset({x}) for x in range(4))
    with pytest.raises(ContractError):
        adjacent_k((a, b), (b, a))
    assert adjacent_k((a, b, c), (a, d, frozenset({9})))
    assert not adjacent_k((a, b), (c, d))
    assert adjacent_single(({0}, {1}), ({1}, {0}), 1)
    assert not adjacent_single((P1, P2), (P2, P1), 3)
    assert not adjacent_single((P1, P2), (P1, P2), 3)


def test_three_parallel_edges_k3():
    assert build_k_base_graph(TRIPLE, 3).stats() == {"vertices": 1, "edges": 0, "connected": True, "components": 1}


def test_k4_k2_base_graph_has_six_isolated_vertices(k4):
    x = build_k_base_graph(k4, 2)
    assert len(x.vertices) == len(bf_k_tuples(4, k4.edges, 2)) == 6
    assert x.edge_count == 0


def test_k_base_graph_precondition(k4):
    with pytest.raises(ContractError, match="6 edges"):
        build_k_base_graph(k4, 3)


def test_doubled_triangle_k3(doubled_triangle):
    x = build_k_base_graph(doubled_triangle, 3)
    oracle = bf_k_tuples(3, doubled_triangle.edges, 3)
    assert {frozenset(t) for t in x.vertices} == oracle
    assert len(oracle) == 8
    assert is_connected(x)


def test_pair_graph_two_parallel_edges():
    x = build_single_exchange_graph(PAIR)
    assert (len(x.vertices), x.edge_count) == (2, 1)


def test_k4_single_exchange_graph(k4):
    x = build_single_exchange_graph(k4)
    assert len(x.vertices) == len(bf_ordered_pairs(4, k4.edges)) == 12
    assert is_connected(x)


def test_reversal_never_adjacent_in_rank_two_or_more():
    for n in (3, 4):
        for g in tight_graphs(2 * (n - 1), 2):
            if rank(g) < 2:
                continue
            x = build_single_exchange_graph(g)
            for i, (a, b) in enumerate(x.vertices):
                assert x.index[(b, a)] not in x.adjacency[i]


def _oracle_check(g, k):
    x = build_k_base_graph(g, k)
    oracle = bf_k_tuples(g.vertex_count, g.edges, k)
    assert {frozenset(t) for t in x.vertices} == oracle
    vs = list(oracle)
    comps = bf_components(vs, lambda a, b: a != b and bool(a & b))
    assert x.component_count() == comps
    return x


@pytest.mark.parametrize("k, max_edges", [(3, 6), (3, 9), (4, 8)])
def test_k_base_graph_matches_oracle_on_tight_graphs(k, max_edges):
    for g in tight_graphs(max_edges, k):
        if len(bf_bases(g.vertex_count, g.edges)) > 120:
            continue  # keep the oracle's combinations tractable
        _oracle_check(g, k)


def test_single_exchange_graph_matches_oracle():
    r_check = 0
    for g in tight_graphs(8, 2):
        x = build_single_exchange_graph(g)
        oracle = bf_ordered_pairs(g.vertex_count, g.edges)
        assert set(x.vertices) == oracle
        r = rank(g)
        vs = sorted(oracle, key=lambda p: (sorted(p[0]), sorted(p[1])))
        assert x.component_count() == bf_components(vs, lambda p, q: len(p[0] & q[0]) == r - 1)
        r_check += 1
    assert r_check > 0


def test_exchange_graph_connectivity_conventions():
    assert is_connected(ExchangeGraph([], [], "k-base"))
    assert is_connected(ExchangeGraph(["a"], [[]], "k-base"))
    assert not is_connected(ExchangeGraph(["a", "b"], [[], []], "k-base"))


def test_single_vertex_fiber(c3):
    x = build_multiset_fiber_graph(c3, (1, 1, 1), 1)
    assert len(x.vertices) == 0  # a single base has only 2 edges
    x = build_multiset_fiber_graph(c3, (1, 1, 2), 2)
    assert [multiset_key(v) for v in x.vertices] == [((0, 2), (1, 2))]


def test_infeasible_fiber_is_empty(c3):
    assert build_multiset_fiber_graph(c3, (3, 1, 0), 2).vertices == []
    assert fiber_multisets(c3, (1, 1, 1), 2) == []


def test_fiber_on_k4_nine_edge_extension(k4):
    s = (2, 2, 2, 1, 1, 1)
    x = build_multiset_fiber_graph(k4, s, 3)
    assert {multiset_key(v) for v in x.vertices} == bf_fiber(4, k4.edges, s, 3)
    assert is_connected(x)


@given(multigraphs(max_vertices=4, max_edges=6, loops=False), st.data())
def test_fibers_match_oracle(g, data):
    bases = list(enumerate_bases(g))
    k = data.draw(st.integers(2, 3))
    chosen = data.draw(st.lists(st.sampled_from(bases), min_size=k, max_size=k))
    s = tuple(sum(1 for b in chosen if e in b) for e in range(g.edge_count))
    x = build_multiset_fiber_graph(g, s, k)
    keys = [multiset_key(v) for v in x.vertices]
    assert set(keys) == bf_fiber(g.vertex_count, g.edges, s, k)
    for i, nbrs in enumerate(x.adjacency):
        for j in range(len(keys)):
            assert (j in nbrs) == differ_by_double_swap(x.vertices[i], x.vertices[j])


def test_bfs_path(k4):
    x = build_single_exchange_graph(k4)
    p = bfs_path(x, x.vertices[0], x.vertices[-1])
    assert p[0] == x.vertices[0] and p[-1] == x.vertices[-1]
    assert bfs_path(x, x.vertices[0], x.vertices[0]) == [x.vertices[0]]
