"""Sign-level feasibility of a graph orientation.

For every vertex pair (u, w) at distance 2 with common neighbours m_1..m_k we
keep one sign eps(u, w; m) per length-2 path u-m-w: the sign of the wedge
product of the two rescaled forms along that path. Relative signs of two
paths are r = eps(m_i) eps(m_j).

Constraints:

* every 4-cycle u-m_i-w-m_j: r_(u,w)(m_i, m_j) * r_(m_i,m_j)(u, w) is +1 for
  a non-bipartite and -1 for a bipartite orientation of that cycle;
* every pair: its eps are not all equal (the multipath sum has strictly
  positive weights). For k = 2 this is the linear condition eps_1 eps_2 = -1.

Signs are encoded eps = (-1)^x over GF(2), with x(m_1) = 0 fixed per pair
(flipping a whole pair is a symmetry). The linear part is solved by Gaussian
elimination with row provenance, so a contradiction comes back as the list
of equations that multiply to 1 = -1. The remaining not-all-equal blocks are
searched over the free variables.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Sequence

from mtlz.graph import FourCycle, Graph, _bits, four_cycles
from mtlz.orientation import CycleType, Orientation, cycle_type


class SignSystemError(ValueError):
    pass


@dataclass(frozen=True)
class PathPair:
    u: int
    w: int
    mids: tuple[int, ...]

    @property
    def k(self) -> int:
        return len(self.mids)

    def label(self, g: Graph) -> str:
        return f"{g.name(self.u)}{g.name(self.w)}"


@dataclass(frozen=True)
class Equation:
    """sum of x over ``variables`` = rhs (mod 2), i.e. product of eps = (-1)^rhs."""

    variables: int  # bitmask
    rhs: int
    kind: str  # "cycle" or "multipath"
    cycle: FourCycle | None = None
    cycle_type: CycleType | None = None
    pair: PathPair | None = None

    def describe(self, g: Graph) -> str:
        name = g.name
        if self.kind == "cycle":
            a, b, c, d = self.cycle.corners
            val = "+1" if self.rhs == 0 else "-1"
            r1 = f"r_{name(a)}{name(b)}{name(c)}{name(d)}"
            r2 = f"r_{name(b)}{name(a)}{name(d)}{name(c)}"
            return f"{r1} {r2} = {val}   (cycle {self.cycle.label(g)} {self.cycle_type.value})"
        p = self.pair
        m1, m2 = p.mids
        return (f"r_{name(p.u)}{name(m1)}{name(p.w)}{name(m2)} = -1   "
                f"(only paths {name(p.u)}-{name(m1)}-{name(p.w)}, {name(p.u)}-{name(m2)}-{name(p.w)})")


@dataclass
class SignSystem:
    graph: Graph
    orientation: Orientation
    pairs: list[PathPair]
    var_of: dict[tuple[int, int], int]  # (pair index, mid) -> variable; gauge mids absent
    equations: list[Equation]
    blocks: list[int]  # pair indices with k >= 3 (not-all-equal)

    @property
    def n_vars(self) -> int:
        return len(self.var_of)

    @property
    def cycle_equations(self) -> list[Equation]:
        return [e for e in self.equations if e.kind == "cycle"]

    def pair_index(self, u: int, w: int) -> int:
        key = (min(u, w), max(u, w))
        for i, p in enumerate(self.pairs):
            if (p.u, p.w) == key:
                return i
        raise SignSystemError(f"{u},{w} is not a distance-2 pair")

    def block_vars(self, i: int) -> list[int | None]:
        p = self.pairs[i]
        return [self.var_of.get((i, m)) for m in p.mids]

    def eps(self, x: int, i: int, m: int) -> int:
        v = self.var_of.get((i, m))
        return 1 if v is None or not x >> v & 1 else -1

    def satisfied(self, x: int) -> bool:
        for e in self.equations:
            if (x & e.variables).bit_count() % 2 != e.rhs:
                return False
        for i in self.blocks:
            vals = {0 if v is None else x >> v & 1 for v in self.block_vars(i)}
            if len(vals) == 1:
                return False
        return True


def path_pairs(g: Graph) -> list[PathPair]:
    out = []
    for u in range(g.n):
        for w in range(u + 1, g.n):
            if g.has_edge(u, w):
                continue
            common = g.adj[u] & g.adj[w]
            if common:
                out.append(PathPair(u, w, tuple(_bits(common))))
    return out


def build_sign_system(g: Graph, o: Orientation) -> SignSystem:
    if o.graph != g:
        raise SignSystemError("orientation belongs to a different graph")
    pairs = path_pairs(g)
    index = {(p.u, p.w): i for i, p in enumerate(pairs)}
    var_of: dict[tuple[int, int], int] = {}
    for i, p in enumerate(pairs):
        if p.k < 2:
            raise SignSystemError(
                f"pair {g.name(p.u)},{g.name(p.w)} has a single length-2 path (via {g.name(p.mids[0])})")
        for m in p.mids[1:]:
            var_of[(i, m)] = len(var_of)

    def bit(i, m):
        v = var_of.get((i, m))
        return 0 if v is None else 1 << v

    equations = []
    for q in four_cycles(g):
        t = cycle_type(o, q)
        if t is CycleType.FORBIDDEN:
            raise SignSystemError(f"cycle {q.label(g)} has a forbidden orientation")
        a, b, c, d = q.corners
        i1 = index[(a, c)]
        i2 = index[(min(b, d), max(b, d))]
        mask = bit(i1, b) ^ bit(i1, d) ^ bit(i2, a) ^ bit(i2, c)
        equations.append(Equation(mask, int(t is CycleType.BIPARTITE), "cycle", cycle=q, cycle_type=t))
    blocks = []
    for i, p in enumerate(pairs):
        if p.k == 2:
            equations.append(Equation(bit(i, p.mids[1]), 1, "multipath", pair=p))
        else:
            blocks.append(i)
    return SignSystem(g, o, pairs, var_of, equations, blocks)


# -- GF(2) elimination -------------------------------------------------------

@dataclass
class _Echelon:
    rows: list[tuple[int, int, int]]  # (mask, rhs, provenance bitmask over equations)
    pivots: dict[int, int]  # column -> row index
    conflict: int | None  # provenance of a 0 = 1 row, if any


def _eliminate(eqs: Sequence[Equation]) -> _Echelon:
    rows: list[tuple[int, int, int]] = []
    pivots: dict[int, int] = {}
    conflict = None
    for j, e in enumerate(eqs):
        mask, rhs, prov = e.variables, e.rhs, 1 << j
        for col, r in pivots.items():
            if mask >> col & 1:
                m2, r2, p2 = rows[r]
                mask, rhs, prov = mask ^ m2, rhs ^ r2, prov ^ p2
        if mask == 0:
            if rhs and (conflict is None or prov.bit_count() < conflict.bit_count()):
                conflict = prov
            continue
        col = (mask & -mask).bit_length() - 1
        # keep the echelon fully reduced
        for col2, r in list(pivots.items()):
            m2, r2, p2 = rows[r]
            if m2 >> col & 1:
                rows[r] = (m2 ^ mask, r2 ^ rhs, p2 ^ prov)
        pivots[col] = len(rows)
        rows.append((mask, rhs, prov))
    return _Echelon(rows, pivots, conflict)


def _reduce(ech: _Echelon, mask: int) -> tuple[int, int, int]:
    rhs = prov = 0
    for col, r in ech.pivots.items():
        if mask >> col & 1:
            m2, r2, p2 = ech.rows[r]
            mask, rhs, prov = mask ^ m2, rhs ^ r2, prov ^ p2
    return mask, rhs, prov


# -- verdicts ----------------------------------------------------------------

@dataclass
class SignVerdict:
    feasible: bool
    assignment: int | None = None  # x bitmask over variables
    certificate: list[Equation] = field(default_factory=list)
    blocking_pairs: list[PathPair] = field(default_factory=list)
    reason: str = ""  # "parity" or "not-all-equal" when infeasible

    def eps_table(self, sys: SignSystem) -> dict[tuple[int, int, int], int]:
        """(u, w, m) -> eps for the witness."""
        out = {}
        for i, p in enumerate(sys.pairs):
            for m in p.mids:
                out[(p.u, p.w, m)] = sys.eps(self.assignment, i, m)
        return out


def _search(sys: SignSystem, ech: _Echelon, blocks: Sequence[int]) -> int | None:
    """Find x satisfying the echelon rows and the given not-all-equal blocks."""
    n = sys.n_vars
    free = [c for c in range(n) if c not in ech.pivots]
    fpos = {c: i for i, c in enumerate(free)}
    # every variable as an affine function of the free ones: (free mask, const)
    affine: dict[int, tuple[int, int]] = {}
    for c in free:
        affine[c] = (1 << fpos[c], 0)
    for col, r in ech.pivots.items():
        mask, rhs, _ = ech.rows[r]
        fm = 0
        for c in _bits(mask & ~(1 << col)):
            fm |= 1 << fpos[c]
        affine[col] = (fm, rhs)

    checks: dict[int, list[list[tuple[int, int]]]] = {}
    for i in blocks:
        forms = [(0, 0) if v is None else affine[v] for v in sys.block_vars(i)]
        dep = 0
        for fm, _ in forms:
            dep |= fm
        level = dep.bit_length() - 1  # -1: constant block
        checks.setdefault(level, []).append(forms)

    def block_ok(forms, y):
        vals = {((fm & y).bit_count() + c) & 1 for fm, c in forms}
        return len(vals) > 1

    if any(not block_ok(f, 0) for f in checks.get(-1, [])):
        return None

    def rec(k: int, y: int):
        if k == len(free):
            return y
        for bitval in (0, 1):
            y2 = y | (bitval << k)
            if all(block_ok(f, y2) for f in checks.get(k, [])):
                res = rec(k + 1, y2)
                if res is not None:
                    return res
        return None

    y = rec(0, 0)
    if y is None:
        return None
    x = 0
    for c, (fm, const) in affine.items():
        if ((fm & y).bit_count() + const) & 1:
            x |= 1 << c
    return x


def solve(sys: SignSystem) -> SignVerdict:
    ech = _eliminate(sys.equations)
    if ech.conflict is not None:
        cert = [sys.equations[j] for j in _bits(ech.conflict)]
        return SignVerdict(False, certificate=cert, reason="parity")
    x = _search(sys, ech, sys.blocks)
    if x is not None:
        return SignVerdict(True, assignment=x)
    # shrink to a set of blocks that is still jointly unsatisfiable
    needed = list(sys.blocks)
    for i in list(needed):
        trial = [j for j in needed if j != i]
        if _search(sys, ech, trial) is None:
            needed = trial
    return SignVerdict(False, blocking_pairs=[sys.pairs[i] for i in needed], reason="not-all-equal")


def solve_exhaustive(sys: SignSystem) -> bool:
    """Oracle: try every assignment of the variables."""
    for bits in product((0, 1), repeat=sys.n_vars):
        x = sum(b << i for i, b in enumerate(bits))
        if sys.satisfied(x):
            return True
    return False


def forced_relation(sys: SignSystem, items: Iterable[tuple[tuple[int, int], int, int]],
                    use_multipath: bool = False) -> int | None:
    """Value of prod r_(u,w)(m_i, m_j) over ``items`` implied by the linear equations.

    Only 4-cycle equations are used unless ``use_multipath``, which adds the
    k = 2 multipath conditions. Returns +1, -1 or None (not implied). A
    product that is an identity in the path signs gives +1 even when the
    equations themselves are contradictory.
    """
    mask = 0
    for (u, w), mi, mj in items:
        i = sys.pair_index(u, w)
        for m in (mi, mj):
            v = sys.var_of.get((i, m))
            if v is not None:
                mask ^= 1 << v
    eqs = sys.equations if use_multipath else sys.cycle_equations
    rest, rhs, _ = _reduce(_eliminate(eqs), mask)
    if rest:
        return None
    return -1 if rhs else 1


@dataclass
class GraphSignResult:
    feasible: bool
    per_class: list[tuple[Orientation, SignVerdict]]

    @property
    def witness(self) -> tuple[Orientation, SignVerdict] | None:
        return next(((o, v) for o, v in self.per_class if v.feasible), None)


def graph_sign_feasible(g: Graph, orientations: Sequence[Orientation] | None = None) -> GraphSignResult:
    from mtlz.orientation import valid_orientations

    classes = valid_orientations(g) if orientations is None else orientations
    per = [(o, solve(build_sign_system(g, o))) for o in classes]
    return GraphSignResult(any(v.feasible for _, v in per), per)
