import pytest
from hypothesis import given, settings

from mtlz.generate import BASIC, enumerate_layer_scheme
from mtlz.graph import build_graph, common_count
from mtlz.library import complete_bipartite, cube, known_graph
from mtlz.rules import (Stage, check_1221_rule, check_length2_path, check_no_3cycle, classify, detect_K33,
                        embeddings_1221, passes_basic, violates_1221)

from conftest import graphs
from oracles import has_k33, has_violating_1221

TRIANGLE = build_graph(3, [(0, 1), (1, 2), (0, 2)])
PATH3 = build_graph(3, [(0, 1), (1, 2)])


def test_triangle_witness():
    assert check_no_3cycle(TRIANGLE) == (0, 1, 2)
    assert check_no_3cycle(known_graph("K3,3")) is None
    assert check_no_3cycle(known_graph("cube+1")) is None


def test_length2_path_property():
    assert check_length2_path(PATH3) == (0, 2, 1)
    assert check_length2_path(known_graph("square")) is None
    assert check_length2_path(known_graph("K1,1")) is None


def test_k33_detection():
    left, right = detect_K33(known_graph("K3,3"))
    g = known_graph("K3,3")
    assert all(g.has_edge(a, b) for a in left for b in right)
    assert detect_K33(complete_bipartite(3, 4)) is not None
    assert detect_K33(cube()) is None


def test_1221_rule_examples():
    g = known_graph("1221")
    emb = check_1221_rule(g)
    assert emb is not None
    assert all(common_count(g, u, w) == 2 for u, w in emb.outer_pairs())
    assert check_1221_rule(known_graph("1222")) is not None
    assert check_1221_rule(cube()) is None
    assert list(embeddings_1221(cube())) == []


def test_1221_embeddings_are_deduplicated():
    # the standalone 1221 graph contains exactly one 1221 subgraph
    assert len(list(embeddings_1221(known_graph("1221")))) == 1


@pytest.mark.parametrize("name, stage", [
    ("K3,3", Stage.REJECTED_K33),
    ("K3,4", Stage.REJECTED_K33),
    ("12221", Stage.REJECTED_1221),
    ("1221", Stage.REJECTED_1221),
    ("cube+1", Stage.ALLOWED),
    ("cube", Stage.ALLOWED),
    ("square", Stage.ALLOWED),
    ("K1,1", Stage.ALLOWED),
    ("fig5a", Stage.ALLOWED),
    ("fig5b", Stage.ALLOWED),
])
def test_classify_known_graphs(name, stage):
    assert classify(known_graph(name)).stage is stage


def test_stage_order():
    assert classify(build_graph(4, [(0, 1), (2, 3)])).stage is Stage.REJECTED_DISCONNECTED
    assert classify(TRIANGLE).stage is Stage.REJECTED_3CYCLE
    assert classify(PATH3).stage is Stage.REJECTED_LENGTH2
    v = classify(known_graph("cube"))
    assert v.allowed and v.witness is None


def test_oracle_equivalence_on_small_graphs(small_graphs):
    mismatches = []
    for g in small_graphs:
        if (detect_K33(g) is not None) != has_k33(g):
            mismatches.append(("K33", g.edge_list))
        if (check_1221_rule(g) is not None) != has_violating_1221(g):
            mismatches.append(("1221", g.edge_list))
    assert mismatches == []


def test_oracle_equivalence_on_n9_basic_graphs():
    for g in enumerate_layer_scheme(9, {BASIC}):
        assert (detect_K33(g) is not None) == has_k33(g)
        assert (check_1221_rule(g) is not None) == has_violating_1221(g)


@settings(max_examples=150)
@given(graphs(min_n=6, max_n=8, p=0.45))
def test_k33_oracle_on_random_graphs(g):
    assert (detect_K33(g) is not None) == has_k33(g)


@settings(max_examples=60)
@given(graphs(min_n=6, max_n=8, p=0.5))
def test_1221_oracle_on_random_triangle_free_graphs(g):
    if check_no_3cycle(g) is None:
        assert (check_1221_rule(g) is not None) == has_violating_1221(g)


def test_basic_counts_up_to_8(levels8):
    counts = {n: sum(passes_basic(g) for g in levels8[n]) for n in range(2, 9)}
    assert counts == {2: 1, 3: 0, 4: 1, 5: 1, 6: 3, 7: 4, 8: 14}


def test_violation_needs_all_four_pairs_deficient():
    # adding a vertex joined to 1 and 4 of the 1221 graph gives pair (1,4) a third path
    g = known_graph("1221")
    emb = next(embeddings_1221(g))
    h = build_graph(7, list(g.edge_list) + [(emb.a, 6), (emb.d, 6)])
    assert not violates_1221(h, next(e for e in embeddings_1221(h) if e.vertices() == emb.vertices()))
