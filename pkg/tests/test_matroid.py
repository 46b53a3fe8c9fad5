import pytest
from hypothesis import given, strategies as st

from forestswap.errors import ContractError, ParseError
from forestswap.graph import MultiGraph
from forestswap.matroid import (
    count_bases,
    enumerate_bases,
    format_bases,
    is_base,
    lift_tuple,
    parallel_extension,
    parse_base,
    parse_bases,
    rank,
    split_components,
)

from _oracles import bf_bases, matrix_tree_count
from strategies import multigraphs

TWO_TRIANGLES = MultiGraph(6, ((0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)))


def test_rank_examples(k4):
    assert rank(k4) == 3
    assert rank(MultiGraph(2, ((0, 1), (0, 1)))) == 1
    assert rank(TWO_TRIANGLES) == 4


def test_k4_has_16_bases(k4):
    assert matrix_tree_count(4, k4.edges) == 16
    assert count_bases(k4) == 16


def test_triangle_bases(c3):
    assert list(enumerate_bases(c3)) == [frozenset({0, 1}), frozenset({0, 2}), frozenset({1, 2})]


def test_loop_only_graph_has_the_empty_base():
    assert list(enumerate_bases(MultiGraph(1, ((0, 0),)))) == [frozenset()]


@given(multigraphs(max_vertices=5, max_edges=8))
def test_enumeration_matches_brute_force(g):
    got = list(enumerate_bases(g))
    assert len(got) == len(set(got))
    assert set(got) == set(bf_bases(g.vertex_count, g.edges))
    assert got == sorted(got, key=sorted)


@given(multigraphs(max_vertices=5, max_edges=8, loops=False))
def test_connected_counts_match_matrix_tree(g):
    if rank(g) == g.vertex_count - 1:
        assert count_bases(g) == matrix_tree_count(g.vertex_count, g.edges)


def test_is_base(k4):
    assert is_base(k4, [0, 1, 2])
    assert not is_base(k4, [0, 1, 3])
    assert not is_base(k4, [0, 0, 1])


def test_extension_identity(c3):
    ext = parallel_extension(c3, (1, 1, 1))
    assert ext.child == c3
    assert ext.alpha == (0, 1, 2)


def test_extension_copies_and_deletes(c3):
    ext = parallel_extension(c3, (2, 1, 0))
    assert ext.child.edges == ((0, 1), (0, 1), (0, 2))
    assert ext.alpha == (0, 0, 1)
    assert ext.fiber(0) == (0, 1)
    assert ext.fiber(2) == ()


def test_extension_of_disjoint_k4_pair_is_k4(k4):
    ext = parallel_extension(k4, (1,) * 6)
    assert ext.child.edge_count == 6
    assert ext.child == k4


def test_extension_rejects_bad_vectors(c3):
    with pytest.raises(ContractError):
        parallel_extension(c3, (1, 1))
    with pytest.raises(ContractError):
        parallel_extension(c3, (1, -1, 1))


def test_lift_makes_disjoint_child_bases(c3):
    bases = [frozenset({0, 1}), frozenset({1, 2}), frozenset({0, 2})]
    ext = parallel_extension(c3, (2, 2, 2))
    lifted = lift_tuple(ext, bases)
    assert frozenset().union(*lifted) == frozenset(range(6))
    assert sum(map(len, lifted)) == 6
    for child, parent in zip(lifted, bases):
        assert is_base(ext.child, child)
        assert ext.project(child) == parent


def test_lift_of_disjoint_k4_pair_is_relabeling(k4):
    p1, p2 = frozenset({0, 3, 5}), frozenset({1, 2, 4})
    assert is_base(k4, p1) and is_base(k4, p2)
    assert not is_base(k4, {3, 4, 5})  # the complement of a star is a triangle
    ext = parallel_extension(k4, (1,) * 6)
    assert lift_tuple(ext, [p1, p2]) == [p1, p2]


def test_lift_rejects_wrong_counts(c3):
    ext = parallel_extension(c3, (2, 1, 1))
    with pytest.raises(ContractError):
        lift_tuple(ext, [frozenset({0, 1}), frozenset({1, 2})])


def test_project_rejects_collisions(c3):
    ext = parallel_extension(c3, (2, 1, 1))
    with pytest.raises(ContractError):
        ext.project({0, 1})


@given(multigraphs(max_vertices=4, max_edges=6, loops=False), st.data())
def test_lift_project_round_trip(g, data):
    bases = list(enumerate_bases(g))
    chosen = data.draw(st.lists(st.sampled_from(bases), min_size=1, max_size=3))
    s = [sum(1 for b in chosen if e in b) for e in range(g.edge_count)]
    ext = parallel_extension(g, s)
    lifted = lift_tuple(ext, chosen)
    assert sum(map(len, lifted)) == len(frozenset().union(*lifted))
    assert [ext.project(x) for x in lifted] == [frozenset(b) for b in chosen]
    assert all(is_base(ext.child, x) for x in lifted)


def test_split_components(k4):
    assert len(split_components(k4)) == 1
    parts = split_components(TWO_TRIANGLES)
    assert [p.graph.edge_count for p in parts] == [3, 3]
    assert parts[1].edge_origin == (3, 4, 5)
    plus_isolated = MultiGraph(5, k4.edges)
    (only,) = split_components(plus_isolated)
    assert only.graph == k4


def test_component_maps(k4):
    (part,) = split_components(TWO_TRIANGLES)[1:]
    assert part.to_parent({0, 1}) == {3, 4}
    assert part.from_parent({0, 3, 4}) == {0, 1}


def test_base_text_forms():
    assert parse_base("3,0,4") == frozenset({0, 3, 4})
    assert parse_base("") == frozenset()
    assert parse_bases("0,1;2,3") == [frozenset({0, 1}), frozenset({2, 3})]
    assert format_bases([frozenset({3, 1}), frozenset({0})]) == "1,3;0"
    for bad in ("0,,1", "a", "1,1", "-1"):
        with pytest.raises(ParseError):
            parse_base(bad)
