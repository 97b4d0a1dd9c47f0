"""Simple undirected graphs and the structural queries used by the classifier.

Vertices are ``0..n-1``. Adjacency is kept as integer bitmasks, which keeps
the common-neighbour and 4-cycle queries cheap at the sizes we care about
(n <= 12).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

# Sentinel distance for vertex pairs in different components.
INF = 1 << 30


class GraphError(ValueError):
    pass


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


@dataclass(frozen=True)
class Graph:
    """Immutable simple graph.

    ``names`` optionally carries display labels (e.g. the 1-based labels used
    in a figure); it takes no part in equality or hashing.
    """

    n: int
    edges: frozenset[tuple[int, int]]
    names: tuple[str, ...] | None = field(default=None, compare=False, repr=False)

    @cached_property
    def adj(self) -> tuple[int, ...]:
        masks = [0] * self.n
        for u, v in self.edges:
            masks[u] |= 1 << v
            masks[v] |= 1 << u
        return tuple(masks)

    @cached_property
    def edge_list(self) -> tuple[tuple[int, int], ...]:
        return tuple(sorted(self.edges))

    @cached_property
    def edge_index(self) -> dict[tuple[int, int], int]:
        return {e: i for i, e in enumerate(self.edge_list)}

    def name(self, v: int) -> str:
        return self.names[v] if self.names else str(v)

    def neighbors(self, v: int) -> list[int]:
        return _bits(self.adj[v])

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    @property
    def m(self) -> int:
        return len(self.edges)

    def relabel(self, perm: Sequence[int]) -> Graph:
        """Return the graph with vertex ``v`` renamed to ``perm[v]``."""
        return Graph(self.n, frozenset(_norm(perm[u], perm[v]) for u, v in self.edges))

    def with_edges(self, extra: Iterable[tuple[int, int]]) -> Graph:
        return build_graph(self.n, list(self.edges) + list(extra))

    def induced(self, vertices: Iterable[int]) -> Graph:
        """Induced subgraph, renumbered in the given order; names are kept."""
        keep = list(vertices)
        pos = {v: i for i, v in enumerate(keep)}
        edges = [(pos[u], pos[v]) for u, v in self.edge_list if u in pos and v in pos]
        return build_graph(len(keep), edges, names=[self.name(v) for v in keep])

    def is_connected(self) -> bool:
        if self.n == 0:
            return True
        seen = 1
        frontier = 1
        while frontier:
            nxt = 0
            for v in _bits(frontier):
                nxt |= self.adj[v]
            frontier = nxt & ~seen
            seen |= nxt
        return seen == (1 << self.n) - 1


def _norm(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


def build_graph(n: int, edges: Iterable[tuple[int, int]], names: Sequence[str] | None = None) -> Graph:
    if n < 0:
        raise GraphError(f"negative vertex count {n}")
    out = set()
    for u, v in edges:
        if not (0 <= u < n and 0 <= v < n):
            raise GraphError(f"edge ({u}, {v}) out of range for n={n}")
        if u == v:
            raise GraphError(f"self-loop at vertex {u}")
        out.add(_norm(u, v))
    if names is not None and len(names) != n:
        raise GraphError("names must have one entry per vertex")
    return Graph(n, frozenset(out), tuple(names) if names is not None else None)


def distance_matrix(g: Graph) -> list[list[int]]:
    """All-pairs hop counts by BFS; ``INF`` marks disconnected pairs."""
    dist = []
    for s in range(g.n):
        row = [INF] * g.n
        row[s] = 0
        q = deque([s])
        while q:
            u = q.popleft()
            for w in g.neighbors(u):
                if row[w] == INF:
                    row[w] = row[u] + 1
                    q.append(w)
        dist.append(row)
    return dist


def diameter(g: Graph) -> int:
    return max((max(row) for row in distance_matrix(g)), default=0)


def common_neighbors(g: Graph, u: int, w: int) -> list[int]:
    if u == w:
        raise GraphError("common_neighbors needs two distinct vertices")
    return _bits(g.adj[u] & g.adj[w])


def common_count(g: Graph, u: int, w: int) -> int:
    return (g.adj[u] & g.adj[w]).bit_count()


@dataclass(frozen=True, order=True)
class FourCycle:
    """Corners (a, b, c, d) of the cycle a-b-c-d-a, with a minimal and b < d."""

    a: int
    b: int
    c: int
    d: int

    @property
    def corners(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    @property
    def edges(self) -> tuple[tuple[int, int], ...]:
        a, b, c, d = self.corners
        return (_norm(a, b), _norm(b, c), _norm(c, d), _norm(d, a))

    @property
    def diagonals(self) -> tuple[tuple[int, int], tuple[int, int]]:
        return (_norm(self.a, self.c), _norm(self.b, self.d))

    def label(self, g: Graph | None = None) -> str:
        name = g.name if g is not None else str
        return "".join(name(v) for v in self.corners)


def four_cycle(a: int, b: int, c: int, d: int) -> FourCycle:
    """Normalise a cyclic corner sequence."""
    seq = [a, b, c, d]
    i = seq.index(min(seq))
    seq = seq[i:] + seq[:i]
    if seq[1] > seq[3]:
        seq = [seq[0], seq[3], seq[2], seq[1]]
    return FourCycle(*seq)


def four_cycles(g: Graph) -> list[FourCycle]:
    """Every 4-cycle exactly once, sorted.

    A 4-cycle is a pair of opposite corners (a, c) plus two of their common
    neighbours; each cycle is seen from both diagonals, so we keep only the
    diagonal containing the minimal corner.
    """
    out = []
    for a in range(g.n):
        for c in range(a + 1, g.n):
            mids = _bits(g.adj[a] & g.adj[c])
            for i, b in enumerate(mids):
                for d in mids[i + 1:]:
                    if a < b and a < d:
                        out.append(FourCycle(a, b, c, d))
    out.sort()
    return out


@dataclass(frozen=True)
class Bipartition:
    bipartite: bool
    coloring: tuple[int, ...] | None = None
    odd_cycle: tuple[int, ...] | None = None


def is_bipartite(g: Graph) -> Bipartition:
    """2-colour by BFS; on failure return an odd cycle through the clashing edge."""
    color = [-1] * g.n
    parent = [-1] * g.n
    for s in range(g.n):
        if color[s] != -1:
            continue
        color[s] = 0
        q = deque([s])
        while q:
            u = q.popleft()
            for w in g.neighbors(u):
                if color[w] == -1:
                    color[w] = 1 - color[u]
                    parent[w] = u
                    q.append(w)
                elif color[w] == color[u]:
                    return Bipartition(False, odd_cycle=_odd_cycle(parent, u, w))
    return Bipartition(True, coloring=tuple(color))


def _odd_cycle(parent: list[int], u: int, w: int) -> tuple[int, ...]:
    def path_to_root(v):
        out = [v]
        while parent[v] != -1:
            v = parent[v]
            out.append(v)
        return out

    pu, pw = path_to_root(u), path_to_root(w)
    on_pw = set(pw)
    lca = next(v for v in pu if v in on_pw)
    left = pu[: pu.index(lca) + 1]
    right = pw[: pw.index(lca)]
    return tuple(left + right[::-1])


@dataclass(frozen=True)
class Layering:
    origin: int
    layers: tuple[tuple[int, ...], ...]

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(len(layer) for layer in self.layers)

    def layer_of(self) -> dict[int, int]:
        return {v: i for i, layer in enumerate(self.layers) for v in layer}


def layer_decomposition(g: Graph, origin: int | None = None) -> Layering:
    """Layer a connected bipartite graph by distance from ``origin``.

    By default the origin is the smallest vertex that is an endpoint of a
    diameter-realising path, so the layering has diameter + 1 layers.
    """
    if not g.is_connected():
        raise GraphError("layer decomposition needs a connected graph")
    bip = is_bipartite(g)
    if not bip.bipartite:
        raise GraphError(f"graph is not bipartite; odd cycle {bip.odd_cycle}")
    dist = distance_matrix(g)
    if origin is None:
        diam = max(max(row) for row in dist)
        origin = next(v for v in range(g.n) if max(dist[v]) == diam)
    depth = max(dist[origin])
    layers = tuple(tuple(v for v in range(g.n) if dist[origin][v] == i) for i in range(depth + 1))
    return Layering(origin, layers)
