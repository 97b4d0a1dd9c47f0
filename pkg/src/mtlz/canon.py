"""Canonical labelling and automorphism groups by partition refinement.

The search is the usual individualise-and-refine tree. Leaves are compared by
a certificate (the relabelled adjacency), the least certificate wins, and
automorphisms found along the way prune both the first path and sibling
orbits. Works on vertex-coloured digraphs; an undirected graph is passed as a
symmetric digraph.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Sequence

from mtlz.graph import Graph, _bits

Perm = tuple[int, ...]


def _refine(cells: list[list[int]], out: Sequence[int], inn: Sequence[int], splitters) -> list[list[int]]:
    """Refine an ordered partition until equitable w.r.t. the given splitters."""
    queue = deque(splitters)
    while queue:
        wmask = queue.popleft()
        new_cells: list[list[int]] = []
        for cell in cells:
            if len(cell) == 1:
                new_cells.append(cell)
                continue
            keyed: dict[tuple[int, int], list[int]] = {}
            for v in cell:
                k = ((out[v] & wmask).bit_count(), (inn[v] & wmask).bit_count())
                keyed.setdefault(k, []).append(v)
            if len(keyed) == 1:
                new_cells.append(cell)
                continue
            for k in sorted(keyed):
                frag = keyed[k]
                new_cells.append(frag)
                mask = 0
                for v in frag:
                    mask |= 1 << v
                queue.append(mask)
        cells = new_cells
    return cells


def _mask(cell) -> int:
    m = 0
    for v in cell:
        m |= 1 << v
    return m


class _UnionFind:
    def __init__(self, n: int):
        self.p = list(range(n))

    def find(self, x: int) -> int:
        while self.p[x] != x:
            self.p[x] = self.p[self.p[x]]
            x = self.p[x]
        return x

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.p[max(ra, rb)] = min(ra, rb)


@dataclass
class Labelling:
    lab: Perm  # canonical position -> original vertex
    certificate: tuple
    generators: list[Perm]

    @property
    def perm(self) -> Perm:
        """Original vertex -> canonical position."""
        out = [0] * len(self.lab)
        for i, v in enumerate(self.lab):
            out[v] = i
        return tuple(out)


def canonical_labelling(n: int, out: Sequence[int], inn: Sequence[int] | None = None,
                        colors: Sequence[int] | None = None) -> Labelling:
    """Canonically label a vertex-coloured digraph given by out/in bitmasks."""
    inn = out if inn is None else inn
    colors = [0] * n if colors is None else list(colors)
    if n == 0:
        return Labelling((), (0, ()), [])
    by_color: dict[int, list[int]] = {}
    for v in range(n):
        by_color.setdefault(colors[v], []).append(v)
    start = [by_color[c] for c in sorted(by_color)]
    color_key = tuple(sorted(colors))
    start = _refine(start, out, inn, [_mask(c) for c in start])

    gens: list[Perm] = []
    first: dict = {}
    best: dict = {}

    def leaf_cert(cells):
        lab = [c[0] for c in cells]
        pos = [0] * n
        for i, v in enumerate(lab):
            pos[v] = i
        rows = []
        for v in lab:
            m = 0
            for w in _bits(out[v]):
                m |= 1 << pos[w]
            rows.append(m)
        return lab, (n, color_key, tuple(rows))

    def as_perm(src, dst) -> Perm:
        p = [0] * n
        for a, b in zip(src, dst):
            p[a] = b
        return tuple(p)

    def search(cells, path) -> int:
        depth = len(path)
        target = next((c for c in cells if len(c) > 1), None)
        if target is None:
            lab, cert = leaf_cert(cells)
            if not first:
                first.update(lab=lab, cert=cert, path=path)
                best.update(lab=lab, cert=cert, path=path)
                return depth
            if cert == first["cert"]:
                gens.append(as_perm(first["lab"], lab))
                return _common(first["path"], path)
            if cert == best["cert"]:
                gens.append(as_perm(best["lab"], lab))
                return _common(best["path"], path)
            if cert < best["cert"]:
                best.update(lab=lab, cert=cert, path=path)
            return depth
        done: list[int] = []
        for v in sorted(target):
            if done and _same_orbit(v, done, path, gens, n):
                continue
            done.append(v)
            idx = cells.index(target)
            rest = [w for w in target if w != v]
            child = cells[:idx] + [[v], rest] + cells[idx + 1:]
            child = _refine(child, out, inn, [1 << v])
            back = search(child, path + (v,))
            if back < depth:
                return back
        return depth

    search(start, ())
    return Labelling(tuple(best["lab"]), best["cert"], gens)


def _common(p: tuple, q: tuple) -> int:
    k = 0
    for a, b in zip(p, q):
        if a != b:
            break
        k += 1
    return k


def _same_orbit(v: int, done: list[int], path: tuple, gens: list[Perm], n: int) -> bool:
    uf = _UnionFind(n)
    for g in gens:
        if all(g[x] == x for x in path):
            for x in range(n):
                uf.union(x, g[x])
    root = uf.find(v)
    return any(uf.find(w) == root for w in done)


@dataclass(frozen=True, order=True)
class CanonicalForm:
    """Total-order key; equal keys iff isomorphic. ``perm`` maps vertex -> canonical label."""

    key: bytes
    perm: Perm = ()

    def __eq__(self, other):
        return isinstance(other, CanonicalForm) and self.key == other.key

    def __hash__(self):
        return hash(self.key)


def canonical_form(g: Graph) -> CanonicalForm:
    from mtlz.graph6 import encode

    lab = canonical_labelling(g.n, g.adj)
    perm = lab.perm
    return CanonicalForm(encode(g.relabel(perm)).encode(), perm)


def canonical_graph(g: Graph) -> Graph:
    return g.relabel(canonical_labelling(g.n, g.adj).perm)


def is_isomorphic(g: Graph, h: Graph) -> bool:
    return g.n == h.n and g.m == h.m and canonical_form(g) == canonical_form(h)


@dataclass(frozen=True)
class AutGroup:
    n: int
    generators: tuple[Perm, ...]

    def order(self) -> int:
        return group_order(self.n, self.generators)

    def orbits(self) -> list[list[int]]:
        uf = _UnionFind(self.n)
        for g in self.generators:
            for x in range(self.n):
                uf.union(x, g[x])
        groups: dict[int, list[int]] = {}
        for x in range(self.n):
            groups.setdefault(uf.find(x), []).append(x)
        return sorted(groups.values())


def automorphisms(g: Graph) -> AutGroup:
    lab = canonical_labelling(g.n, g.adj)
    return AutGroup(g.n, tuple(lab.generators))


def digraph_automorphisms(n: int, arcs) -> AutGroup:
    out = [0] * n
    inn = [0] * n
    for a, b in arcs:
        out[a] |= 1 << b
        inn[b] |= 1 << a
    return AutGroup(n, tuple(canonical_labelling(n, out, inn).generators))


# Schreier-Sims, enough for degree <= 12.

def _compose(p: Perm, q: Perm) -> Perm:
    """Apply p then q."""
    return tuple(q[x] for x in p)


def _inverse(p: Perm) -> Perm:
    out = [0] * len(p)
    for i, x in enumerate(p):
        out[x] = i
    return tuple(out)


def group_order(n: int, generators: Sequence[Perm]) -> int:
    identity = tuple(range(n))
    gens = [tuple(g) for g in generators if tuple(g) != identity]
    if not gens:
        return 1
    base: list[int] = []
    strong: list[list[Perm]] = []  # strong[i]: generators fixing base[:i]
    transversals: list[dict[int, Perm]] = []

    def orbit_transversal(b, sgens):
        t = {b: identity}
        q = deque([b])
        while q:
            x = q.popleft()
            for s in sgens:
                y = s[x]
                if y not in t:
                    t[y] = _compose(t[x], s)
                    q.append(y)
        return t

    def sift(h):
        for i, b in enumerate(base):
            y = h[b]
            if y not in transversals[i]:
                return h, i
            h = _compose(h, _inverse(transversals[i][y]))
        return h, len(base)

    def extend_base(h):
        b = next(x for x in range(n) if h[x] != x)
        base.append(b)
        strong.append([])
        transversals.append({b: identity})

    for g in gens:
        if not base:
            extend_base(g)
        strong[0].append(g)
    transversals[0] = orbit_transversal(base[0], strong[0])

    i = len(base) - 1
    while i >= 0:
        restart = False
        t = transversals[i]
        for u, tu in list(t.items()):
            for s in strong[i]:
                y = s[u]
                schreier = _compose(_compose(tu, s), _inverse(t[y]))
                if schreier == identity:
                    continue
                h, j = sift(schreier)
                if h == identity:
                    continue
                if j == len(base):
                    extend_base(h)
                for k in range(i + 1, j + 1):
                    strong[k].append(h)
                    transversals[k] = orbit_transversal(base[k], strong[k])
                i = j
                restart = True
                break
            if restart:
                break
        if not restart:
            i -= 1
    order = 1
    for t in transversals:
        order *= len(t)
    return order
