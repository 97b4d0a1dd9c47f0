"""Named graphs: complete bipartite graphs, layer graphs, cubes and the N=9 figures."""

from __future__ import annotations

import re
from itertools import product

from mtlz.graph import Graph, GraphError, build_graph


def complete_bipartite(m: int, n: int) -> Graph:
    return build_graph(m + n, [(a, m + b) for a in range(m) for b in range(n)])


def layer_graph(sizes: list[int] | tuple[int, ...]) -> Graph:
    """Maximally connected layer graph, e.g. ``(1, 2, 2, 1)`` for 1221."""
    layers, start = [], 0
    for s in sizes:
        layers.append(range(start, start + s))
        start += s
    edges = [(u, v) for a, b in zip(layers, layers[1:]) for u, v in product(a, b)]
    return build_graph(start, edges)


def cube(extra_diagonals: int = 0) -> Graph:
    """3-cube on bit-strings 0..7, plus up to 3 long (antipodal) diagonals."""
    edges = [(a, a ^ (1 << k)) for a in range(8) for k in range(3) if a < a ^ (1 << k)]
    # Long diagonals keep the graph triangle-free; face diagonals would not.
    diagonals = [(0, 7), (1, 6), (2, 5), (3, 4)]
    return build_graph(8, edges + diagonals[:extra_diagonals])


def cartesian_product(g: Graph, h: Graph) -> Graph:
    """Vertex (i, j) becomes i * h.n + j."""
    edges = [(i * h.n + a, i * h.n + b) for i in range(g.n) for a, b in h.edge_list]
    edges += [(a * h.n + j, b * h.n + j) for a, b in g.edge_list for j in range(h.n)]
    return build_graph(g.n * h.n, edges)


def _labelled(n: int, edges: list[tuple[int, int]]) -> Graph:
    """Graph given with 1-based figure labels; vertex i-1 is named str(i)."""
    return build_graph(n, [(a - 1, b - 1) for a, b in edges], names=[str(i) for i in range(1, n + 1)])


# N=9 graph drawn as layers 1|3|3|2; labels as in its appendix figure.
FIG5A_EDGES = [
    (1, 2), (1, 3), (1, 4),
    (2, 5), (2, 6), (3, 5), (3, 7), (4, 6), (4, 7),
    (5, 8), (5, 9), (6, 8), (6, 9), (7, 8), (7, 9),
]

# N=9 graph drawn as layers 1|3|4|1; labels as in its appendix figure.
FIG5B_EDGES = [
    (1, 5), (1, 6), (1, 8),
    (2, 5), (2, 6), (2, 7),
    (3, 6), (3, 7), (3, 8),
    (4, 5), (4, 7), (4, 8),
    (5, 9), (6, 9), (7, 9), (8, 9),
]


def _paper_1221() -> Graph:
    return _labelled(6, [(1, 2), (1, 3), (2, 4), (2, 5), (3, 4), (3, 5), (4, 6), (5, 6)])


def _k33() -> Graph:
    return _labelled(6, [(a, b) for a in (1, 2, 3) for b in (4, 5, 6)])


def _square() -> Graph:
    # Corners 1,2 opposite and 3,4 opposite, as in the 4-cycle figure.
    return _labelled(4, [(1, 3), (1, 4), (2, 3), (2, 4)])


def _1232_minus_1() -> Graph:
    # Layers {0} {1,2} {3,4,5} {6,7}; drop one edge between the last two layers.
    g = layer_graph((1, 2, 3, 2))
    return build_graph(8, [e for e in g.edges if e != (5, 7)])


LAYER_NAMES = ("1221", "1222", "1231", "1223", "1232", "1322", "1241", "2222", "12221")

_SPECIAL = {
    "square": _square,
    "K3,3": _k33,
    "1221": _paper_1221,
    "cube": lambda: cube(0),
    "cube+1": lambda: cube(1),
    "cube+2": lambda: cube(2),
    "cube+3": lambda: cube(3),
    "1232-1": _1232_minus_1,
    "fig5a": lambda: _labelled(9, FIG5A_EDGES),
    "fig5b": lambda: _labelled(9, FIG5B_EDGES),
}


def known_names() -> list[str]:
    names = [f"K{m},{n}" for m in range(1, 7) for n in range(m, 7)]
    return names + [k for k in _SPECIAL if k not in names] + [k for k in LAYER_NAMES if k not in _SPECIAL]


def known_graph(name: str) -> Graph:
    key = name.strip()
    if key in _SPECIAL:
        return _SPECIAL[key]()
    if key.endswith("xK2") and key != "xK2":
        return cartesian_product(known_graph(key[:-3]), complete_bipartite(1, 1))
    m = re.fullmatch(r"K(\d+),(\d+)", key.replace(" ", "").replace("_", ","))
    if m:
        a, b = int(m.group(1)), int(m.group(2))
        if 1 <= a <= 12 and 1 <= b <= 12:
            if (a, b) == (3, 3):
                return _k33()
            return complete_bipartite(a, b)
    if key in LAYER_NAMES:
        return layer_graph(tuple(int(ch) for ch in key))
    raise GraphError(f"unknown graph name {name!r}")
