"""Structural properties and the two no-go rules, with witnesses."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from itertools import combinations
from typing import Iterator

from mtlz.graph import Graph, _bits, common_count, four_cycles


class Stage(enum.Enum):
    REJECTED_DISCONNECTED = "RejectedDisconnected"
    REJECTED_3CYCLE = "Rejected3Cycle"
    REJECTED_LENGTH2 = "RejectedLength2Path"
    REJECTED_K33 = "RejectedK33"
    REJECTED_1221 = "Rejected1221"
    ALLOWED = "Allowed"


@dataclass(frozen=True)
class Embedding1221:
    """Vertices a | b c | d e | f of a 1221 subgraph."""

    a: int
    b: int
    c: int
    d: int
    e: int
    f: int

    def outer_pairs(self) -> tuple[tuple[int, int], ...]:
        return ((self.a, self.d), (self.a, self.e), (self.b, self.f), (self.c, self.f))

    def vertices(self) -> tuple[int, ...]:
        return (self.a, self.b, self.c, self.d, self.e, self.f)


@dataclass(frozen=True)
class Verdict:
    stage: Stage
    witness: object = None

    @property
    def allowed(self) -> bool:
        return self.stage is Stage.ALLOWED


def check_no_3cycle(g: Graph) -> tuple[int, int, int] | None:
    """Return a triangle (u < v < w) or None."""
    for u, v in g.edge_list:
        common = g.adj[u] & g.adj[v]
        if common:
            w = (common & -common).bit_length() - 1
            return tuple(sorted((u, v, w)))
    return None


def check_length2_path(g: Graph) -> tuple[int, int, int] | None:
    """Return (u, w, m) where m is the only common neighbour of u and w, or None."""
    for u in range(g.n):
        for w in range(u + 1, g.n):
            common = g.adj[u] & g.adj[w]
            if common and common.bit_count() == 1:
                return (u, w, common.bit_length() - 1)
    return None


def detect_K33(g: Graph) -> tuple[tuple[int, int, int], tuple[int, int, int]] | None:
    """A K3,3 subgraph exists iff some vertex triple has >= 3 common neighbours."""
    for triple in combinations(range(g.n), 3):
        x, y, z = triple
        common = g.adj[x] & g.adj[y] & g.adj[z]
        if common.bit_count() >= 3:
            return triple, tuple(_bits(common)[:3])
    return None


def embeddings_1221(g: Graph) -> Iterator[Embedding1221]:
    """Every 1221 subgraph once (up to its own reflection symmetries)."""
    seen = set()
    for q in four_cycles(g):
        for (b, c), (d, e) in (q.diagonals, q.diagonals[::-1]):
            tops = g.adj[b] & g.adj[c] & ~(1 << d | 1 << e)
            bottoms = g.adj[d] & g.adj[e] & ~(1 << b | 1 << c)
            for a in _bits(tops):
                for f in _bits(bottoms):
                    if a == f:
                        continue
                    fwd = (a, b, c, d, e, f)
                    rev = (f, d, e, b, c, a)
                    key = min(fwd, rev)
                    if key not in seen:
                        seen.add(key)
                        yield Embedding1221(*key)


def violates_1221(g: Graph, emb: Embedding1221) -> bool:
    return all(common_count(g, u, w) == 2 for u, w in emb.outer_pairs())


def check_1221_rule(g: Graph) -> Embedding1221 | None:
    """Return a 1221 subgraph with no extra length-2 path between outer pairs, or None."""
    for emb in embeddings_1221(g):
        if violates_1221(g, emb):
            return emb
    return None


def passes_basic(g: Graph) -> bool:
    return g.is_connected() and check_no_3cycle(g) is None and check_length2_path(g) is None


def classify(g: Graph) -> Verdict:
    if not g.is_connected():
        return Verdict(Stage.REJECTED_DISCONNECTED)
    tri = check_no_3cycle(g)
    if tri is not None:
        return Verdict(Stage.REJECTED_3CYCLE, tri)
    lonely = check_length2_path(g)
    if lonely is not None:
        return Verdict(Stage.REJECTED_LENGTH2, lonely)
    k33 = detect_K33(g)
    if k33 is not None:
        return Verdict(Stage.REJECTED_K33, k33)
    emb = check_1221_rule(g)
    if emb is not None:
        return Verdict(Stage.REJECTED_1221, emb)
    return Verdict(Stage.ALLOWED)
