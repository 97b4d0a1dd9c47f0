import io

import networkx as nx
import numpy as np
import pytest
from hypothesis import given

from mtlz import graph6
from mtlz.graph import GraphError, build_graph
from mtlz.library import known_graph

from conftest import graphs
from oracles import to_nx


def test_square_encoding():
    assert graph6.encode(build_graph(4, [(0, 1), (1, 2), (2, 3), (0, 3)])) == "Cl"


def test_empty_and_single_vertex():
    assert graph6.encode(build_graph(0, [])) == "?"
    assert graph6.encode(build_graph(1, [])) == "@"


@given(graphs(max_n=12))
def test_encoding_matches_networkx(g):
    ref = nx.to_graph6_bytes(to_nx(g), header=False).decode().strip()
    assert graph6.encode(g) == ref


@given(graphs(max_n=12))
def test_round_trip(g):
    s = graph6.encode(g)
    assert graph6.decode(s) == g
    assert graph6.encode(graph6.decode(s)) == s


@pytest.mark.parametrize("n", [62, 63, 64, 100])
def test_long_size_prefix(n):
    rng = np.random.default_rng(n)
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < 0.05]
    g = build_graph(n, edges)
    s = graph6.encode(g)
    assert s.startswith("~") == (n >= 63)
    assert graph6.decode(s) == g
    assert s == nx.to_graph6_bytes(to_nx(g), header=False).decode().strip()


def test_header_is_accepted():
    assert graph6.decode(">>graph6<<Cl") == build_graph(4, [(0, 1), (1, 2), (2, 3), (0, 3)])


@pytest.mark.parametrize("bad", ["", "C", "Clx", "C\x7f", "~", "~~?"])
def test_malformed_strings(bad):
    with pytest.raises(GraphError):
        graph6.decode(bad)


def test_file_round_trip():
    gs = [known_graph(n) for n in ("square", "K3,3", "cube", "fig5a", "fig5b")]
    buf = io.StringIO()
    assert graph6.write(gs, buf) == 5
    buf.seek(0)
    assert list(graph6.read(buf)) == gs
