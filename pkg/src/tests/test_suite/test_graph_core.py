"""Bitset graph operations, extremal constructions and their recognition."""

from math import comb

import pytest

from rainbow_spectral.graph_core import (
    ExtremalKind,
    ExtremalParams,
    Graph,
    add_edge,
    are_isomorphic,
    complement,
    complete_graph,
    component_masks,
    construct_extremal,
    degree,
    degree_sequence,
    edges,
    empty_graph,
    from_edges,
    graphs_equal,
    induced,
    is_connected,
    is_extremal_copy,
    is_independent,
    join,
    lift_edges,
    neighbors,
    recognize_extremal,
    relabel,
    remove_edge,
    union,
    vertices_of,
)


def mk_cycle(n: int) -> Graph:
    return from_edges(n, [(v, v % n + 1) for v in range(1, n + 1)])


def mk_star(n: int, center: int = 1) -> Graph:
    return from_edges(n, [(center, v) for v in range(1, n + 1) if v != center])


def test_graph_rejects_malformed_rows():
    with pytest.raises(ValueError):
        Graph(3, (0b010, 0b000, 0b000))
    with pytest.raises(ValueError):
        Graph(2, (0b001, 0b000))
    with pytest.raises(ValueError):
        Graph(2, (0b100, 0b000))
    with pytest.raises(ValueError):
        Graph(0, ())


def test_edges_are_sorted_pairs():
    g = from_edges(4, [(3, 1), (4, 2), (2, 1)])
    assert edges(g) == [(1, 2), (1, 3), (2, 4)]
    assert g.edge_count == 3
    assert g.has_edge(3, 1)
    assert not g.has_edge(3, 4)


def test_from_edges_rejects_loops_and_range():
    with pytest.raises(ValueError):
        from_edges(3, [(2, 2)])
    with pytest.raises(ValueError):
        from_edges(3, [(1, 4)])


def test_add_and_remove_edge():
    g = add_edge(empty_graph(3), 1, 3)
    assert edges(g) == [(1, 3)]
    assert remove_edge(g, 3, 1) == empty_graph(3)


def test_degree_and_neighbors():
    g = mk_star(5, center=2)
    assert degree(g, 2) == 4
    assert neighbors(g, 2) == frozenset({1, 3, 4, 5})
    assert degree_sequence(g) == (4, 1, 1, 1, 1)
    with pytest.raises(ValueError):
        degree(g, 6)


def test_complement_of_complete_graph_is_empty():
    assert complement(complete_graph(5)) == empty_graph(5)
    assert complement(empty_graph(4)).edge_count == 6


def test_vertices_of_mask():
    assert vertices_of(0b10110) == [2, 3, 5]
    assert vertices_of(0) == []


def test_union_and_join_append_labels():
    k2 = complete_graph(2)
    e2 = empty_graph(2)
    assert edges(union(k2, k2)) == [(1, 2), (3, 4)]
    joined = join(k2, e2)
    assert joined.n == 4
    assert joined.edge_count == 1 + 4
    assert not joined.has_edge(3, 4)


def test_union_on_fixed_split():
    left = from_edges(4, [(1, 2)])
    right = from_edges(4, [(3, 4)])
    assert edges(union(left, right, part=[1, 2])) == [(1, 2), (3, 4)]
    assert join(left, right, part=[1, 2]).edge_count == 6
    with pytest.raises(ValueError):
        union(left, right, part=[1, 3])


@pytest.mark.parametrize("n,m,i", [(6, 2, 1), (6, 2, 2), (6, 2, 3), (8, 2, 3), (9, 3, 2), (4, 1, 2)])
def test_extremal_construction_shape(n, m, i):
    p = ExtremalParams(n, m, i)
    g = construct_extremal(p)
    hub = list(range(1, i))
    assert g.edge_count == p.expected_edge_count
    for v in hub:
        assert degree(g, v) == n - 1
    clique = list(range(i, 2 * m - i + 3))
    assert len(clique) == p.clique_size
    for u in clique:
        for v in clique:
            if u < v:
                assert g.has_edge(u, v)
    rest = list(range(2 * m - i + 3, n + 1))
    assert len(rest) == p.independent_size
    assert is_independent(g, rest)


def test_extremal_named_examples():
    # K_5 plus an isolated vertex
    assert edges(construct_extremal(ExtremalParams(6, 2, 1))) == edges(
        union(complete_graph(5), empty_graph(1))
    )
    # K_2 joined to four isolated vertices
    split = construct_extremal(ExtremalParams(6, 2, 3))
    assert degree_sequence(split) == (5, 5, 2, 2, 2, 2)
    assert split.edge_count == 9


def test_extremal_params_validation():
    with pytest.raises(ValueError):
        ExtremalParams(5, 2, 1)
    with pytest.raises(ValueError):
        ExtremalParams(6, 2, 4)
    with pytest.raises(ValueError):
        ExtremalParams(6, 0, 1)


def test_components_and_connectivity():
    g = union(complete_graph(3), complete_graph(2))
    assert component_masks(g) == [0b00111, 0b11000]
    assert not is_connected(g)
    assert is_connected(mk_cycle(5))
    assert is_connected(empty_graph(1))


def test_induced_relabels_and_lifts():
    g = mk_cycle(5)
    sub = induced(g, {2, 3, 5})
    assert sub.labels == (2, 3, 5)
    assert edges(sub.graph) == [(1, 2)]
    assert lift_edges(sub, edges(sub.graph)) == [(2, 3)]
    ordered = induced(g, [5, 1, 2])
    assert edges(ordered.graph) == [(1, 2), (2, 3)]
    with pytest.raises(ValueError):
        induced(g, [])
    with pytest.raises(ValueError):
        induced(g, [1, 1])


def test_relabel_permutes_edges():
    g = from_edges(3, [(1, 2)])
    assert edges(relabel(g, [3, 1, 2])) == [(1, 3)]
    with pytest.raises(ValueError):
        relabel(g, [1, 1, 2])


def test_graphs_equal_is_labeled():
    a = from_edges(3, [(1, 2)])
    b = from_edges(3, [(2, 3)])
    assert not graphs_equal(a, b)
    assert are_isomorphic(a, b)
    with pytest.raises(ValueError):
        graphs_equal(a, empty_graph(4))


def test_isomorphism_search():
    assert are_isomorphic(mk_cycle(6), relabel(mk_cycle(6), [4, 2, 6, 1, 5, 3]))
    two_triangles = union(complete_graph(3), complete_graph(3))
    assert not are_isomorphic(mk_cycle(6), two_triangles)
    assert not are_isomorphic(mk_star(4), mk_cycle(4))
    with pytest.raises(ValueError):
        are_isomorphic(empty_graph(9), empty_graph(9))


def test_recognize_split_graph():
    g = relabel(construct_extremal(ExtremalParams(7, 2, 3)), [7, 3, 1, 2, 4, 5, 6])
    rec = recognize_extremal(g, 7, 2)
    assert rec.kind is ExtremalKind.A_M_PLUS_1
    assert rec.witness == frozenset({7, 3})
    assert is_extremal_copy(g, 2, ExtremalKind.A_M_PLUS_1)


def test_recognize_clique_plus_isolated():
    g = relabel(construct_extremal(ExtremalParams(7, 2, 1)), [2, 3, 4, 5, 6, 7, 1])
    rec = recognize_extremal(g, 7, 2)
    assert rec.kind is ExtremalKind.A1
    assert rec.witness == frozenset({2, 3, 4, 5, 6})
    assert g.edge_count == comb(5, 2)


def test_recognize_rejects_intermediate_and_near_misses():
    assert recognize_extremal(construct_extremal(ExtremalParams(8, 2, 2)), 8, 2).kind is ExtremalKind.NEITHER
    almost = remove_edge(construct_extremal(ExtremalParams(7, 2, 1)), 1, 2)
    assert recognize_extremal(almost, 7, 2).kind is ExtremalKind.NEITHER
    assert recognize_extremal(complete_graph(6), 6, 2).kind is ExtremalKind.NEITHER


def test_recognize_star_for_m_equal_one():
    rec = recognize_extremal(mk_star(5, center=4), 5, 1)
    assert rec.kind is ExtremalKind.A_M_PLUS_1
    assert rec.witness == frozenset({4})


def test_recognize_validates_arguments():
    with pytest.raises(ValueError):
        recognize_extremal(complete_graph(5), 5, 2)
    with pytest.raises(ValueError):
        recognize_extremal(complete_graph(5), 6, 1)
