"""Candidate graph streams.

Two generators:

* ``enumerate_connected_triangle_free`` -- exhaustive, by canonical
  augmentation (add one vertex adjacent to an independent set; keep the child
  only if the new vertex is the canonical one to delete). Includes
  non-bipartite graphs.
* ``enumerate_layer_scheme`` -- bipartite graphs built layer by layer from a
  root vertex, with optional pruning by vertex counts per layer.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import combinations_with_replacement
from typing import Iterable, Iterator

from mtlz.canon import canonical_form, canonical_labelling, _UnionFind
from mtlz.graph import Graph, _bits, build_graph

log = logging.getLogger(__name__)

# Filter names understood by the generators.
BASIC = "basic"  # length-2 path property (no 3-cycle is automatic)
INNER = "inner"  # inner layers hold >= 2 vertices
NO22 = "no22"  # no two adjacent inner layers of size 2
RULES = "rules"  # full staged classification must end in Allowed


@dataclass(frozen=True)
class GeneratorConfig:
    n: int
    mode: str = "exhaustive"  # or "layer"
    filters: frozenset[str] = field(default_factory=frozenset)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.mode not in ("exhaustive", "layer"):
            raise ValueError(f"unknown mode {self.mode!r}")


def generate(cfg: GeneratorConfig) -> list[Graph]:
    from mtlz.rules import Stage, classify, check_length2_path

    if cfg.mode == "layer":
        graphs = list(enumerate_layer_scheme(cfg.n, cfg.filters))
    else:
        graphs = list(enumerate_connected_triangle_free(cfg.n))
        if BASIC in cfg.filters:
            graphs = [g for g in graphs if check_length2_path(g) is None]
    if RULES in cfg.filters:
        graphs = [g for g in graphs if classify(g).stage is Stage.ALLOWED]
    return graphs


# -- exhaustive --------------------------------------------------------------

def _independent_sets(g: Graph) -> Iterator[int]:
    """All non-empty independent vertex sets, as bitmasks."""
    n = g.n
    adj = g.adj

    def rec(v: int, chosen: int, banned: int):
        if v == n:
            if chosen:
                yield chosen
            return
        yield from rec(v + 1, chosen, banned)
        if not banned >> v & 1:
            yield from rec(v + 1, chosen | 1 << v, banned | adj[v])

    yield from rec(0, 0, 0)


def _map_mask(mask: int, perm) -> int:
    out = 0
    for v in _bits(mask):
        out |= 1 << perm[v]
    return out


def _set_orbit_reps(g: Graph, gens) -> list[int]:
    seen: set[int] = set()
    reps = []
    for s in _independent_sets(g):
        if s in seen:
            continue
        reps.append(s)
        stack = [s]
        seen.add(s)
        while stack:
            t = stack.pop()
            for p in gens:
                u = _map_mask(t, p)
                if u not in seen:
                    seen.add(u)
                    stack.append(u)
    return reps


def _non_cut_vertices(g: Graph) -> list[int]:
    full = (1 << g.n) - 1
    out = []
    for v in range(g.n):
        rest = full & ~(1 << v)
        if not rest:
            out.append(v)
            continue
        start = rest & -rest
        seen = frontier = start
        while frontier:
            nxt = 0
            for u in _bits(frontier):
                nxt |= g.adj[u]
            nxt &= rest
            frontier = nxt & ~seen
            seen |= nxt
        if seen == rest:
            out.append(v)
    return out


def _vertex_invariant(g: Graph, v: int) -> tuple:
    return (g.degree(v), tuple(sorted(g.degree(w) for w in g.neighbors(v))))


def _accept(child: Graph, new: int) -> bool:
    """Is ``new`` in the orbit of the canonically chosen deletable vertex?"""
    candidates = _non_cut_vertices(child)
    inv = {v: _vertex_invariant(child, v) for v in candidates}
    low = min(inv.values())
    if inv[new] != low:
        return False
    tied = [v for v in candidates if inv[v] == low]
    if len(tied) == 1:
        return True
    lab = canonical_labelling(child.n, child.adj)
    perm = lab.perm
    chosen = max(tied, key=lambda v: perm[v])
    if chosen == new:
        return True
    uf = _UnionFind(child.n)
    for p in lab.generators:
        for x in range(child.n):
            uf.union(x, p[x])
    return uf.find(chosen) == uf.find(new)


def _children(parent: Graph) -> list[Graph]:
    gens = canonical_labelling(parent.n, parent.adj).generators
    n = parent.n
    out = []
    for s in _set_orbit_reps(parent, gens):
        child = build_graph(n + 1, list(parent.edges) + [(v, n) for v in _bits(s)])
        if _accept(child, n):
            out.append(child)
    return out


def _canonical_sorted(graphs: Iterable[Graph]) -> list[Graph]:
    keyed = []
    for g in graphs:
        cf = canonical_form(g)
        keyed.append((cf.key, g.relabel(cf.perm)))
    keyed.sort(key=lambda t: t[0])
    return [g for _, g in keyed]


def connected_triangle_free_levels(n_max: int, workers: int = 1) -> dict[int, list[Graph]]:
    """All levels 1..n_max, each a canonical, sorted, duplicate-free list."""
    levels = {1: [build_graph(1, [])]}
    for k in range(2, n_max + 1):
        parents = levels[k - 1]
        if workers > 1:
            from concurrent.futures import ProcessPoolExecutor

            with ProcessPoolExecutor(workers) as ex:
                batches = list(ex.map(_children, parents, chunksize=16))
        else:
            batches = [_children(p) for p in parents]
        levels[k] = _canonical_sorted(c for batch in batches for c in batch)
        log.info("n=%d: %d connected triangle-free graphs", k, len(levels[k]))
    return levels


def enumerate_connected_triangle_free(n: int, workers: int = 1) -> Iterator[Graph]:
    if n < 1:
        raise ValueError("n must be >= 1")
    yield from connected_triangle_free_levels(n, workers)[n]


# -- layer scheme ------------------------------------------------------------

def _compositions(total: int) -> Iterator[tuple[int, ...]]:
    if total == 0:
        yield ()
        return
    for first in range(1, total + 1):
        for rest in _compositions(total - first):
            yield (first,) + rest


def layer_sizes(n: int, filters: Iterable[str] = ()) -> Iterator[tuple[int, ...]]:
    """Layer size sequences N_0..N_d with N_0 = 1, optionally pruned."""
    filters = set(filters)
    for rest in _compositions(n - 1):
        sizes = (1,) + rest
        inner = sizes[1:-1]
        if INNER in filters and any(s < 2 for s in inner):
            continue
        if NO22 in filters and any(a == 2 and b == 2 for a, b in zip(inner, inner[1:])):
            continue
        yield sizes


def _layer_graphs(sizes: tuple[int, ...], basic: bool) -> Iterator[Graph]:
    from mtlz.rules import check_length2_path

    starts = [sum(sizes[:i]) for i in range(len(sizes))]
    n = sum(sizes)
    adj = [0] * n

    def pair_ok(layer: int) -> bool:
        # once layer+1 is placed, pairs inside `layer` and pairs between
        # layer-1 and layer+1 have all their common neighbours fixed
        lo = starts[layer]
        vs = range(lo, lo + sizes[layer])
        for i in vs:
            for j in vs:
                if i < j and (adj[i] & adj[j]).bit_count() == 1:
                    return False
        if layer >= 1:
            a0 = starts[layer - 1]
            b0 = starts[layer + 1]
            for a in range(a0, a0 + sizes[layer - 1]):
                for b in range(b0, b0 + sizes[layer + 1]):
                    if (adj[a] & adj[b]).bit_count() == 1:
                        return False
        return True

    def place(layer: int):
        if layer == len(sizes):
            g = build_graph(n, [(u, v) for u in range(n) for v in _bits(adj[u]) if u < v])
            if not basic or check_length2_path(g) is None:
                yield g
            return
        below = starts[layer - 1]
        width = sizes[layer - 1]
        masks = range(1, 1 << width)
        base = starts[layer]
        for choice in combinations_with_replacement(masks, sizes[layer]):
            for k, m in enumerate(choice):
                v = base + k
                for w in _bits(m):
                    adj[v] |= 1 << (below + w)
                    adj[below + w] |= 1 << v
            if not basic or pair_ok(layer - 1):
                yield from place(layer + 1)
            for k, m in enumerate(choice):
                v = base + k
                for w in _bits(m):
                    adj[v] &= ~(1 << (below + w))
                    adj[below + w] &= ~(1 << v)

    if len(sizes) == 1:
        yield build_graph(n, [])
        return
    yield from place(1)


def enumerate_layer_scheme(n: int, filters: Iterable[str] = ()) -> Iterator[Graph]:
    """Connected bipartite graphs on n vertices, one per isomorphism class.

    ``filters`` may contain BASIC (length-2 path property, checked as layers
    are placed), INNER and NO22 (layer-size pruning). RULES is applied by
    :func:`generate`, not here.
    """
    if n < 2:
        raise ValueError("layer scheme needs n >= 2")
    filters = set(filters)
    basic = BASIC in filters
    seen: dict[bytes, Graph] = {}
    for sizes in layer_sizes(n, filters):
        for g in _layer_graphs(sizes, basic):
            cf = canonical_form(g)
            if cf.key not in seen:
                seen[cf.key] = g.relabel(cf.perm)
    for key in sorted(seen):
        yield seen[key]
