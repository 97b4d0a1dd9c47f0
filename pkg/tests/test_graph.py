import pytest
from hypothesis import given

from mtlz.graph import (INF, GraphError, build_graph, common_neighbors, diameter, distance_matrix, four_cycle,
                        four_cycles, is_bipartite, layer_decomposition)
from mtlz.library import cube, known_graph, layer_graph

from conftest import graphs
from oracles import four_cycle_edge_sets, to_nx

import networkx as nx


def test_build_graph_rejects_bad_edges():
    with pytest.raises(GraphError):
        build_graph(3, [(0, 3)])
    with pytest.raises(GraphError):
        build_graph(3, [(1, 1)])


def test_edges_are_normalised_and_deduplicated():
    g = build_graph(3, [(1, 0), (0, 1), (2, 1)])
    assert g.edge_list == ((0, 1), (1, 2))
    assert g.m == 2


def test_path_distances():
    g = build_graph(4, [(0, 1), (1, 2), (2, 3)])
    assert distance_matrix(g)[0] == [0, 1, 2, 3]
    assert diameter(g) == 3


def test_disconnected_distance_is_inf():
    g = build_graph(3, [(0, 1)])
    assert distance_matrix(g)[0][2] == INF


@given(graphs(max_n=7))
def test_distances_match_networkx(g):
    ref = dict(nx.all_pairs_shortest_path_length(to_nx(g)))
    d = distance_matrix(g)
    for u in range(g.n):
        for v in range(g.n):
            assert d[u][v] == ref[u].get(v, INF)


def test_common_neighbors_requires_distinct_vertices():
    g = known_graph("square")
    assert common_neighbors(g, 0, 1) == [2, 3]
    with pytest.raises(GraphError):
        common_neighbors(g, 0, 0)


def test_four_cycle_counts():
    assert len(four_cycles(known_graph("square"))) == 1
    assert len(four_cycles(known_graph("K3,3"))) == 9
    assert len(four_cycles(cube())) == 6
    assert len(four_cycles(build_graph(4, [(0, 1), (1, 2), (2, 3)]))) == 0


def test_four_cycle_normal_form():
    assert four_cycle(3, 2, 1, 0) == four_cycle(0, 1, 2, 3) == four_cycle(2, 3, 0, 1)


@given(graphs(max_n=7))
def test_four_cycles_match_quadruple_search(g):
    got = {frozenset(frozenset(e) for e in q.edges) for q in four_cycles(g)}
    assert got == four_cycle_edge_sets(g)
    assert len(got) == len(four_cycles(g))


def test_four_cycles_on_all_small_triangle_free_graphs(small_graphs):
    for g in small_graphs:
        got = {frozenset(frozenset(e) for e in q.edges) for q in four_cycles(g)}
        assert got == four_cycle_edge_sets(g)


def test_odd_cycle_witness():
    c5 = build_graph(5, [(i, (i + 1) % 5) for i in range(5)])
    res = is_bipartite(c5)
    assert not res.bipartite
    cyc = res.odd_cycle
    assert len(cyc) % 2 == 1
    assert all(c5.has_edge(cyc[i], cyc[(i + 1) % len(cyc)]) for i in range(len(cyc)))


@given(graphs(max_n=8))
def test_bipartite_matches_networkx(g):
    res = is_bipartite(g)
    assert res.bipartite == nx.is_bipartite(to_nx(g))
    if res.bipartite:
        assert all(res.coloring[u] != res.coloring[v] for u, v in g.edge_list)


def test_layer_decomposition_of_layer_graphs():
    for sizes in [(1, 2, 2, 1), (1, 3, 3, 1), (1, 2, 3, 2)]:
        assert layer_decomposition(layer_graph(sizes)).sizes == sizes


def test_layer_decomposition_rejects_non_bipartite():
    c5 = build_graph(5, [(i, (i + 1) % 5) for i in range(5)])
    with pytest.raises(GraphError):
        layer_decomposition(c5)


def test_induced_subgraph_keeps_names():
    g = known_graph("fig5a")
    h = g.induced(range(1, 9))
    assert h.n == 8 and h.m == 12
    assert [h.name(v) for v in range(h.n)] == [str(i) for i in range(2, 10)]
