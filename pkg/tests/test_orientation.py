from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from mtlz.canon import automorphisms
from mtlz.graph import four_cycles
from mtlz.library import known_graph
from mtlz.orientation import (CycleType, Orientation, OrientationError, all_valid_orientations,
                              bipartite_cycle_count, cycle_type, cycle_types, from_arcs, is_valid,
                              sources_and_sinks, to_dot, valid_orientations)

from oracles import cycle_type_by_counting

SQ = known_graph("square")  # corners named 1..4; cycle 1-3-2-4


def _arcs_by_name(g, pairs):
    idx = {g.name(v): v for v in range(g.n)}
    return [(idx[a], idx[b]) for a, b in pairs]


def test_figure_patterns():
    q = four_cycles(SQ)[0]
    nb = from_arcs(SQ, _arcs_by_name(SQ, [("1", "3"), ("1", "4"), ("3", "2"), ("4", "2")]))
    bp = from_arcs(SQ, _arcs_by_name(SQ, [("1", "3"), ("1", "4"), ("2", "3"), ("2", "4")]))
    cyc = from_arcs(SQ, _arcs_by_name(SQ, [("1", "3"), ("3", "2"), ("2", "4"), ("4", "1")]))
    assert cycle_type(nb, q) is CycleType.NON_BIPARTITE
    assert cycle_type(bp, q) is CycleType.BIPARTITE
    assert cycle_type(cyc, q) is CycleType.FORBIDDEN


def test_isolated_four_cycle_has_six_valid_orientations():
    q = four_cycles(SQ)[0]
    tally = {t: 0 for t in CycleType}
    for signs in product((-1, 1), repeat=4):
        tally[cycle_type(Orientation(SQ, signs), q)] += 1
    assert tally == {CycleType.NON_BIPARTITE: 4, CycleType.BIPARTITE: 2, CycleType.FORBIDDEN: 10}


@pytest.mark.parametrize("name", ["square", "K2,3", "K3,3", "cube", "1221"])
def test_cycle_type_matches_source_sink_counting(name):
    g = known_graph(name)
    for signs in list(product((-1, 1), repeat=g.m))[:: max(1, 2 ** g.m // 512)]:
        o = Orientation(g, signs)
        arcs = set(o.arcs())
        for q in four_cycles(g):
            assert cycle_type(o, q).value == cycle_type_by_counting(arcs, q.corners)


def test_sign_convention():
    o = from_arcs(SQ, [(0, 2), (0, 3), (2, 1), (3, 1)])
    assert o.sign(0, 2) == -1 and o.sign(2, 0) == 1
    assert set(o.arcs()) == {(0, 2), (0, 3), (2, 1), (3, 1)}


def test_orientation_validation():
    with pytest.raises(OrientationError):
        Orientation(SQ, (1, 1, 1))
    with pytest.raises(OrientationError):
        from_arcs(SQ, [(0, 1)])


@settings(max_examples=100)
@given(st.data())
def test_reversal_preserves_cycle_types(data):
    g = known_graph(data.draw(st.sampled_from(["K3,3", "cube", "fig5b", "1221"])))
    signs = tuple(data.draw(st.lists(st.sampled_from([-1, 1]), min_size=g.m, max_size=g.m)))
    o = Orientation(g, signs)
    assert cycle_types(o) == cycle_types(o.reversed())


@settings(max_examples=50)
@given(st.data())
def test_automorphisms_preserve_cycle_type_multiset(data):
    g = known_graph(data.draw(st.sampled_from(["K3,3", "fig5b", "cube+1"])))
    o = data.draw(st.sampled_from(list(all_valid_orientations(g))))
    gens = automorphisms(g).generators
    p = data.draw(st.sampled_from(gens))
    o2 = o.relabel(p)
    assert o2.graph == g
    assert is_valid(o2)
    assert bipartite_cycle_count(o2) == bipartite_cycle_count(o)
    assert o2.class_key() == o.class_key()


def test_all_valid_orientations_match_brute_force():
    for name in ["square", "K2,3", "K3,3", "1221"]:
        g = known_graph(name)
        brute = {s for s in product((-1, 1), repeat=g.m) if is_valid(Orientation(g, s))}
        assert {o.signs for o in all_valid_orientations(g)} == brute


@pytest.mark.parametrize("name, count", [("square", 2), ("K3,3", 2), ("fig5b", 8), ("K1,1", 1)])
def test_class_counts(name, count):
    assert len(valid_orientations(known_graph(name))) == count


def test_class_representatives_are_orbit_minima():
    g = known_graph("K3,3")
    reps = valid_orientations(g)
    keys = {o.class_key() for o in reps}
    for o in all_valid_orientations(g):
        assert o.class_key() in keys
        rep = next(r for r in reps if r.class_key() == o.class_key())
        assert rep.signs <= o.signs


def test_square_classes_are_one_of_each_type():
    types = sorted(cycle_types(o)[four_cycles(SQ)[0]].value for o in valid_orientations(SQ))
    assert types == ["Bipartite", "NonBipartite"]


def test_k33_figure_orientations():
    g = known_graph("K3,3")
    counts = {}
    for o in valid_orientations(g):
        src, snk = sources_and_sinks(o)
        counts[(len(src), len(snk))] = bipartite_cycle_count(o)
    # 3 sources + 3 sinks -> all nine bipartite; 2 sources + 1 sink (or reversed) -> three
    assert counts[(3, 3)] == 9
    assert counts.get((2, 1), counts.get((1, 2))) == 3


def test_k33_figure_b_bipartite_cycles():
    g = known_graph("K3,3")
    idx = {g.name(v): v for v in range(g.n)}
    # sources 1, 2; sink 3
    arcs = [(idx[a], idx[b]) for a in "12" for b in "456"] + [(idx[b], idx["3"]) for b in "456"]
    o = from_arcs(g, arcs)
    bip = sorted(q.label(g) for q, t in cycle_types(o).items() if t is CycleType.BIPARTITE)
    assert bip == ["1425", "1426", "1526"]


def test_k33_bipartite_count_always_odd():
    g = known_graph("K3,3")
    allv = list(all_valid_orientations(g))
    assert len(allv) == 14
    assert all(bipartite_cycle_count(o) % 2 == 1 for o in allv)


def test_bipartite_count_rejects_forbidden():
    o = from_arcs(SQ, _arcs_by_name(SQ, [("1", "3"), ("3", "2"), ("2", "4"), ("4", "1")]))
    with pytest.raises(OrientationError):
        bipartite_cycle_count(o)
    nb = from_arcs(SQ, _arcs_by_name(SQ, [("1", "3"), ("1", "4"), ("3", "2"), ("4", "2")]))
    assert bipartite_cycle_count(nb) == 0


def test_dot_export():
    o = from_arcs(SQ, [(0, 2), (0, 3), (2, 1), (3, 1)])
    dot = to_dot(o, name="sq")
    assert dot.startswith("digraph sq {")
    assert "0 -> 2;" in dot and "2 -> 1;" in dot
    assert '[label="1"]' in dot
    assert "NonBipartite" in dot
    assert dot.count("->") == 4


def test_fig5a_counts_whole_graph_and_nine_cycle_core():
    g = known_graph("fig5a")
    assert len(valid_orientations(g)) == 12
    core = g.induced(range(1, 9))  # drop vertex 1
    # the nine cycles of the appendix argument, as vertex sets
    appendix = ["2568", "2596", "4687", "4697", "3587", "3597", "5869", "6879", "5879"]
    got = {frozenset(core.name(v) for v in q.corners) for q in four_cycles(core)}
    assert got == {frozenset(c) for c in appendix}
    classes = valid_orientations(core)
    assert len(classes) == 8
    assert all(bipartite_cycle_count(o) % 2 == 1 for o in classes)
