"""Edge orientations (coupling signs) and 4-cycle orientation types.

An orientation stores the sign s^{uv} for every edge (u, v), u < v, in the
order of ``Graph.edge_list``. Arrow convention: a -> b iff s^{ab} = -1.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterator, Sequence

from mtlz.canon import canonical_labelling
from mtlz.graph import FourCycle, Graph, four_cycles


class CycleType(enum.Enum):
    NON_BIPARTITE = "NonBipartite"
    BIPARTITE = "Bipartite"
    FORBIDDEN = "Forbidden"


class OrientationError(ValueError):
    pass


@dataclass(frozen=True)
class Orientation:
    graph: Graph
    signs: tuple[int, ...]

    def __post_init__(self):
        if len(self.signs) != self.graph.m or any(s not in (-1, 1) for s in self.signs):
            raise OrientationError("need one sign in {-1, +1} per edge")

    def sign(self, a: int, b: int) -> int:
        """s^{ab}; antisymmetric in (a, b)."""
        if a < b:
            return self.signs[self.graph.edge_index[(a, b)]]
        return -self.signs[self.graph.edge_index[(b, a)]]

    def arcs(self) -> list[tuple[int, int]]:
        return [(u, v) if s == -1 else (v, u) for (u, v), s in zip(self.graph.edge_list, self.signs)]

    def reversed(self) -> Orientation:
        return Orientation(self.graph, tuple(-s for s in self.signs))

    def relabel(self, perm: Sequence[int]) -> Orientation:
        """Transport along a vertex map (e.g. an automorphism)."""
        h = self.graph.relabel(perm)
        return from_arcs(h, [(perm[a], perm[b]) for a, b in self.arcs()])

    def class_key(self) -> tuple:
        """Equal iff the orientations agree up to automorphism and global reversal."""
        return min(_digraph_cert(self.graph.n, self.arcs()),
                   _digraph_cert(self.graph.n, [(b, a) for a, b in self.arcs()]))


def from_arcs(g: Graph, arcs) -> Orientation:
    signs = [0] * g.m
    for a, b in arcs:
        key = (a, b) if a < b else (b, a)
        if key not in g.edge_index:
            raise OrientationError(f"({a}, {b}) is not an edge")
        signs[g.edge_index[key]] = -1 if a < b else 1
    if 0 in signs:
        raise OrientationError("arcs do not cover every edge")
    return Orientation(g, tuple(signs))


def _digraph_cert(n: int, arcs) -> tuple:
    out = [0] * n
    inn = [0] * n
    for a, b in arcs:
        out[a] |= 1 << b
        inn[b] |= 1 << a
    return canonical_labelling(n, out, inn).certificate


def _type_from_arrows(corners, points) -> CycleType:
    # points[i]: does the edge corners[i]-corners[i+1] point forward?
    # corner i touches edge i-1 (incoming if forward) and edge i (outgoing if forward)
    kinds = []
    for i in range(4):
        out_deg = int(points[i]) + int(not points[i - 1])
        kinds.append({2: "source", 0: "sink", 1: "mid"}[out_deg])
    sources = [i for i, k in enumerate(kinds) if k == "source"]
    sinks = [i for i, k in enumerate(kinds) if k == "sink"]
    if len(sources) == 1 and len(sinks) == 1 and (sources[0] - sinks[0]) % 4 == 2:
        return CycleType.NON_BIPARTITE
    if len(sources) == 2 and len(sinks) == 2 and (sources[0] - sources[1]) % 4 == 2:
        return CycleType.BIPARTITE
    return CycleType.FORBIDDEN


def cycle_type(o: Orientation, q: FourCycle) -> CycleType:
    c = q.corners
    return _type_from_arrows(c, [o.sign(c[i], c[(i + 1) % 4]) == -1 for i in range(4)])


def cycle_types(o: Orientation) -> dict[FourCycle, CycleType]:
    return {q: cycle_type(o, q) for q in four_cycles(o.graph)}


def is_valid(o: Orientation) -> bool:
    return all(t is not CycleType.FORBIDDEN for t in cycle_types(o).values())


def bipartite_cycle_count(o: Orientation) -> int:
    types = cycle_types(o)
    bad = [q for q, t in types.items() if t is CycleType.FORBIDDEN]
    if bad:
        raise OrientationError(f"forbidden 4-cycle {bad[0].corners}")
    return sum(t is CycleType.BIPARTITE for t in types.values())


def _edge_order(g: Graph, cycles: list[FourCycle]) -> list[int]:
    """Greedy edge order that closes 4-cycles as early as possible."""
    idx = g.edge_index
    cyc_edges = [[idx[e] for e in q.edges] for q in cycles]
    order: list[int] = []
    placed: set[int] = set()
    while len(order) < g.m:
        def score(e):
            closes = sum(1 for ce in cyc_edges if e in ce and all(x in placed or x == e for x in ce))
            touches = sum(1 for ce in cyc_edges if e in ce and any(x in placed for x in ce))
            return (closes, touches, -e)
        e = max((e for e in range(g.m) if e not in placed), key=score)
        order.append(e)
        placed.add(e)
    return order


def all_valid_orientations(g: Graph) -> Iterator[Orientation]:
    """Every orientation with no forbidden 4-cycle (no symmetry reduction)."""
    cycles = four_cycles(g)
    order = _edge_order(g, cycles)
    pos = {e: i for i, e in enumerate(order)}
    idx = g.edge_index
    closing: dict[int, list[FourCycle]] = {}
    for q in cycles:
        last = max(q.edges, key=lambda e: pos[idx[e]])
        closing.setdefault(idx[last], []).append(q)
    signs = [0] * g.m

    def ok(e: int) -> bool:
        for q in closing.get(e, ()):
            c = q.corners
            fwd = []
            for i in range(4):
                a, b = c[i], c[(i + 1) % 4]
                s = signs[idx[(a, b) if a < b else (b, a)]]
                fwd.append((s == -1) == (a < b))
            if _type_from_arrows(c, fwd) is CycleType.FORBIDDEN:
                return False
        return True

    def rec(k: int):
        if k == g.m:
            yield Orientation(g, tuple(signs))
            return
        e = order[k]
        for s in (-1, 1):
            signs[e] = s
            if ok(e):
                yield from rec(k + 1)
        signs[e] = 0

    yield from rec(0)


def valid_orientations(g: Graph) -> list[Orientation]:
    """One representative (the least sign tuple) per class under Aut(g) x reversal."""
    best: dict[tuple, Orientation] = {}
    for o in all_valid_orientations(g):
        key = o.class_key()
        if key not in best or o.signs < best[key].signs:
            best[key] = o
    return sorted(best.values(), key=lambda o: o.signs)


def sources_and_sinks(o: Orientation) -> tuple[list[int], list[int]]:
    g = o.graph
    outd = [0] * g.n
    for a, _ in o.arcs():
        outd[a] += 1
    sources = [v for v in range(g.n) if g.degree(v) and outd[v] == g.degree(v)]
    sinks = [v for v in range(g.n) if g.degree(v) and outd[v] == 0]
    return sources, sinks


def to_dot(o: Orientation, name: str = "G", types: bool = True) -> str:
    """Graphviz digraph; bipartite-type 4-cycles are listed as a comment."""
    g = o.graph
    lines = [f"digraph {name} {{", "  node [shape=circle];"]
    for v in range(g.n):
        lines.append(f'  {v} [label="{g.name(v)}"];')
    for a, b in o.arcs():
        lines.append(f"  {a} -> {b};")
    if types:
        for q, t in cycle_types(o).items():
            lines.append(f"  // cycle {q.label(g)}: {t.value}")
    lines.append("}")
    return "\n".join(lines) + "\n"
