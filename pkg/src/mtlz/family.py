"""Explicit MTLZ families: construction and numerical verification.

Data on a graph: a symmetric M x M matrix Lambda^a per vertex, a rescaled
linear form Abar^{ab} (length M) and |gamma^{ab}| > 0 per edge, with the sign
s^{ab} taken from the orientation. Couplings are A^{ab} = sqrt|gamma| Abar.

Integrability on the graph data:
    Lambda^a - Lambda^b = s_ab Abar^{ab} (x) Abar^{ab}          (every edge)
    sum_c sqrt|gamma^{ac} gamma^{cb}| Abar^{ac} ^ Abar^{cb} = 0   (distance-2 pairs)
"""

from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import least_squares

from mtlz.graph import Graph, build_graph
from mtlz.orientation import CycleType, Orientation, from_arcs
from mtlz.signs import path_pairs

RESIDUAL_TOL = 1e-9
GOOD_FAMILY_TOL = 1e-6
SEARCH_TOL = 1e-8
SEARCH_MARGIN = 0.1


class FamilyError(ValueError):
    def __init__(self, msg: str, residual: float | None = None):
        super().__init__(msg)
        self.residual = residual


def wedge(f, g):
    """Antisymmetric product; a scalar when M = 2, else the (i<j) components."""
    f = np.asarray(f, dtype=float)
    g = np.asarray(g, dtype=float)
    if f.shape != g.shape:
        raise ValueError("forms must have equal dimension")
    if f.shape[-1] == 2:
        return f[..., 0] * g[..., 1] - f[..., 1] * g[..., 0]
    i, j = np.triu_indices(f.shape[-1], 1)
    return f[..., i] * g[..., j] - f[..., j] * g[..., i]


def sin_angle(f, g) -> float:
    f = np.asarray(f, float)
    g = np.asarray(g, float)
    nf, ng = np.linalg.norm(f), np.linalg.norm(g)
    if nf == 0 or ng == 0:
        return 0.0
    return float(np.linalg.norm(np.atleast_1d(wedge(f, g))) / (nf * ng))


def partner_forms(a13, a14, theta: float, p: int, r: int, ctype: CycleType):
    """Forms on edges 23 and 24 of a 4-cycle 1-3-2-4 given those on 13 and 14."""
    a13 = np.asarray(a13, float)
    a14 = np.asarray(a14, float)
    if sin_angle(a13, a14) < 1e-12:
        raise FamilyError("forms on 13 and 14 are parallel")
    ch, sh = math.cosh(theta), math.sinh(theta)
    if ctype is CycleType.NON_BIPARTITE:
        a24 = p * (ch * a13 - r * sh * a14)
        a23 = p * (sh * a13 - r * ch * a14)
    elif ctype is CycleType.BIPARTITE:
        a24 = p * (r * sh * a13 + ch * a14)
        a23 = p * (r * ch * a13 + sh * a14)
    else:
        raise FamilyError("no forms exist for a forbidden cycle orientation")
    return a23, a24


@dataclass
class MTLZFamily:
    graph: Graph
    orientation: Orientation
    lam: np.ndarray  # (n, M, M)
    forms: np.ndarray  # (m, M) rescaled forms, edge_list order
    gamma_abs: np.ndarray  # (m,)
    params: dict = field(default_factory=dict)

    @property
    def M(self) -> int:
        return self.forms.shape[1]

    def gamma(self, a: int, b: int) -> float:
        e = self.graph.edge_index[(min(a, b), max(a, b))]
        return self.orientation.sign(a, b) * self.gamma_abs[e]

    def coupling(self, a: int, b: int) -> np.ndarray:
        e = self.graph.edge_index[(min(a, b), max(a, b))]
        return math.sqrt(self.gamma_abs[e]) * self.forms[e]


@dataclass
class HamiltonianSet:
    A: np.ndarray  # (M, N, N)
    B: np.ndarray  # (M, M, N, N), B[k, j] diagonal

    @property
    def M(self) -> int:
        return self.A.shape[0]

    def H(self, j: int, x) -> np.ndarray:
        """H_j(x) = B_kj x^k + A_j."""
        return np.einsum("k,kab->ab", np.asarray(x, float), self.B[:, j]) + self.A[j]


# -- square in closed form ----------------------------------------------------

def square_graph() -> Graph:
    from mtlz.library import known_graph

    return known_graph("square")


def square_orientation(ctype: CycleType) -> Orientation:
    """Corners named 1..4 (vertices 0..3): 1 source / 2 sink, or 1, 2 sources."""
    g = square_graph()
    if ctype is CycleType.NON_BIPARTITE:
        arcs = [(0, 2), (0, 3), (2, 1), (3, 1)]
    else:
        arcs = [(0, 2), (0, 3), (1, 2), (1, 3)]
    return from_arcs(g, arcs)


def square_forms(a13, a14, theta: float, p: int, r: int, ctype: CycleType) -> np.ndarray:
    """Per-edge forms on the square, edge_list order (13, 14, 23, 24)."""
    a23, a24 = partner_forms(a13, a14, theta, p, r, ctype)
    g = square_graph()
    by_edge = {(0, 2): np.asarray(a13, float), (0, 3): np.asarray(a14, float), (1, 2): a23, (1, 3): a24}
    return np.array([by_edge[e] for e in g.edge_list])


def build_square_family(a13, a14, theta: float, p: int = 1, base_lam=None,
                        gammas: tuple[float, float] = (1.0, 1.0)) -> MTLZFamily:
    """Closed-form family on the square (non-bipartite, r = -1).

    The multipath conditions reduce to |g13| = |g24| and |g14| = |g23|;
    ``gammas`` gives these two free magnitudes.
    """
    ctype = CycleType.NON_BIPARTITE
    o = square_orientation(ctype)
    g = o.graph
    forms = square_forms(a13, a14, theta, p, -1, ctype)
    g1, g2 = gammas
    mag = {(0, 2): g1, (1, 3): g1, (0, 3): g2, (1, 2): g2}
    gamma_abs = np.array([mag[e] for e in g.edge_list], float)
    lam, _ = propagate_lambda(g, o, forms, base_lam=base_lam)
    return MTLZFamily(g, o, lam, forms, gamma_abs, {"theta": theta, "p": p, "r": -1})


# -- general construction steps ----------------------------------------------

def _bfs_tree(g: Graph, base: int):
    parent = {base: None}
    order = [base]
    q = deque([base])
    while q:
        a = q.popleft()
        for b in g.neighbors(a):
            if b not in parent:
                parent[b] = a
                order.append(b)
                q.append(b)
    return parent, order


def _propagate(g: Graph, o: Orientation, forms: np.ndarray, base: int, base_lam: np.ndarray):
    M = forms.shape[1]
    parent, order = _bfs_tree(g, base)
    if len(order) != g.n:
        raise FamilyError("graph is not connected")
    lam = np.zeros((g.n, M, M))
    lam[base] = base_lam
    tree = set()
    for b in order[1:]:
        a = parent[b]
        e = g.edge_index[(min(a, b), max(a, b))]
        tree.add(e)
        lam[b] = lam[a] - o.sign(a, b) * np.outer(forms[e], forms[e])
    closures = []
    for e, (a, b) in enumerate(g.edge_list):
        if e not in tree:
            closures.append(lam[a] - lam[b] - o.sign(a, b) * np.outer(forms[e], forms[e]))
    return lam, closures


def propagate_lambda(g: Graph, o: Orientation, forms, base: int = 0, base_lam=None,
                     tol: float | None = RESIDUAL_TOL):
    """Vertex forms from Lambda^a - Lambda^b = s_ab Abar (x) Abar along a spanning tree.

    Returns (lam, closure residual). Raises FamilyError when the residual on
    the non-tree edges (the cycle property) exceeds ``tol``.
    """
    forms = np.asarray(forms, float)
    M = forms.shape[1]
    base_lam = np.zeros((M, M)) if base_lam is None else np.asarray(base_lam, float)
    if not np.allclose(base_lam, base_lam.T):
        raise FamilyError("base quadratic form must be symmetric")
    lam, closures = _propagate(g, o, forms, base, base_lam)
    residual = max((float(np.abs(c).max()) for c in closures), default=0.0)
    if tol is not None and residual > tol:
        raise FamilyError(f"cycle property violated (closure residual {residual:.3g})", residual)
    return lam, residual


def _pair_terms(g: Graph, forms: np.ndarray):
    """Per distance-2 pair: list of (edge u-m, edge m-w, wedge of the two forms)."""
    out = []
    idx = g.edge_index
    for p in path_pairs(g):
        terms = []
        for m in p.mids:
            e1 = idx[(min(p.u, m), max(p.u, m))]
            e2 = idx[(min(p.w, m), max(p.w, m))]
            terms.append((e1, e2, np.atleast_1d(wedge(forms[e1], forms[e2]))))
        out.append(terms)
    return out


def multipath_residual(g: Graph, forms, gamma_abs, relative: bool = False) -> float:
    forms = np.asarray(forms, float)
    root = np.sqrt(np.asarray(gamma_abs, float))
    worst = 0.0
    for terms in _pair_terms(g, forms):
        total = sum(root[e1] * root[e2] * w for e1, e2, w in terms)
        size = np.abs(total).max()
        if relative:
            scale = sum(root[e1] * root[e2] * np.abs(w).max() for e1, e2, w in terms)
            size = size / scale if scale > 0 else 0.0
        worst = max(worst, float(size))
    return worst


@dataclass
class GammaResult:
    gamma_abs: np.ndarray | None
    residual: float
    free_parameters: int
    ok: bool
    message: str = ""


def solve_gamma(g: Graph, o: Orientation, forms, tol: float = RESIDUAL_TOL, seed: int = 0,
                starts: int = 8) -> GammaResult:
    """Positive |gamma| making every multipath sum vanish.

    Unknowns are y_e = log sqrt|gamma_e|. When M = 2 and every distance-2
    pair has exactly two paths, the conditions are linear in y; otherwise a
    bounded least-squares search is used.
    """
    forms = np.asarray(forms, float)
    m = g.m
    M = forms.shape[1]
    pairs = _pair_terms(g, forms)
    for terms in pairs:
        if M == 2:
            vals = np.array([w[0] for _, _, w in terms])
            if np.all(vals > 0) or np.all(vals < 0):
                return GammaResult(None, math.inf, 0, False, "all path wedges of a pair share a sign")
    if not pairs:
        return GammaResult(np.ones(m), 0.0, m, True, "no distance-2 pairs")

    if M == 2 and all(len(t) == 2 for t in pairs):
        rows, rhs = [], []
        for (a1, b1, w1), (a2, b2, w2) in pairs:
            row = np.zeros(m)
            row[a1] += 1
            row[b1] += 1
            row[a2] -= 1
            row[b2] -= 1
            if w1[0] == 0 or w2[0] == 0:
                return GammaResult(None, math.inf, 0, False, "vanishing wedge in a two-path pair")
            rows.append(row)
            rhs.append(math.log(abs(w2[0])) - math.log(abs(w1[0])))
        mat = np.array(rows)
        y, *_ = np.linalg.lstsq(mat, np.array(rhs), rcond=None)
        rank = np.linalg.matrix_rank(mat)
        gamma_abs = np.exp(2 * y)
        res = multipath_residual(g, forms, gamma_abs, relative=True)
        return GammaResult(gamma_abs if res < tol else None, res, m - rank, res < tol,
                           "log-linear solve")

    rng = np.random.default_rng(seed)

    def fun(y):
        root = np.exp(y)
        out = []
        for terms in pairs:
            total = sum(root[e1] * root[e2] * w for e1, e2, w in terms)
            scale = sum(root[e1] * root[e2] * np.abs(w).max() for e1, e2, w in terms) + 1e-300
            out.extend(total / scale)
        out.append(1e-3 * y.mean())
        return np.array(out)

    best = None
    for _ in range(starts):
        y0 = rng.normal(scale=0.5, size=m)
        sol = least_squares(fun, y0, bounds=(-15, 15), xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=4000)
        if best is None or sol.cost < best.cost:
            best = sol
    gamma_abs = np.exp(2 * best.x)
    res = multipath_residual(g, forms, gamma_abs, relative=True)
    jac = best.jac[:-1]
    rank = np.linalg.matrix_rank(jac, tol=1e-7) if jac.size else 0
    ok = res < tol
    return GammaResult(gamma_abs if ok else None, res, m - rank, ok,
                       "least squares" if ok else "no positive solution found")


def make_family(g: Graph, o: Orientation, forms, gamma_abs, base_lam=None, params=None) -> MTLZFamily:
    lam, _ = propagate_lambda(g, o, forms, base_lam=base_lam, tol=None)
    return MTLZFamily(g, o, lam, np.asarray(forms, float), np.asarray(gamma_abs, float), dict(params or {}))


# -- matrices and checks --------------------------------------------------------

def assemble_hamiltonians(fam: MTLZFamily) -> HamiltonianSet:
    g, M, N = fam.graph, fam.M, fam.graph.n
    A = np.zeros((M, N, N))
    for e, (a, b) in enumerate(g.edge_list):
        coupling = math.sqrt(fam.gamma_abs[e]) * fam.forms[e]
        A[:, a, b] = coupling
        A[:, b, a] = coupling
    B = np.zeros((M, M, N, N))
    for k in range(M):
        for j in range(M):
            B[k, j] = np.diag(fam.lam[:, k, j])
    return HamiltonianSet(A, B)


def _comm(x, y):
    return x @ y - y @ x


@dataclass
class IntegrabilityReport:
    b_symmetry: float
    b_commute: float
    eq7: float  # [B_sj, A_k] - [B_sk, A_j]
    eq8: float  # [A_j, A_k]
    samples: float  # [H_i(x), H_j(x)] over sample points
    tol: float = RESIDUAL_TOL

    @property
    def worst(self) -> float:
        return max(self.b_symmetry, self.b_commute, self.eq7, self.eq8, self.samples)

    @property
    def passed(self) -> bool:
        return self.worst < self.tol

    def failures(self) -> list[str]:
        names = {"b_symmetry": "B symmetry", "b_commute": "[B, B]", "eq7": "[B, A] relation",
                 "eq8": "[A_j, A_k]", "samples": "[H_i(x), H_j(x)]"}
        return [label for key, label in names.items() if getattr(self, key) >= self.tol]


def check_integrability(h: HamiltonianSet, sample_points=None, tol: float = RESIDUAL_TOL,
                        seed: int = 0) -> IntegrabilityReport:
    M = h.M
    B, A = h.B, h.A
    sym = max(float(np.abs(B[k, j] - B[j, k]).max()) for k in range(M) for j in range(M))
    flat = [B[k, j] for k in range(M) for j in range(M)]
    bcomm = max(float(np.abs(_comm(x, y)).max()) for x in flat for y in flat)
    eq7 = 0.0
    for s in range(M):
        for j in range(M):
            for k in range(M):
                d = _comm(B[s, j], A[k]) - _comm(B[s, k], A[j])
                eq7 = max(eq7, float(np.abs(d).max()))
    eq8 = max((float(np.abs(_comm(A[j], A[k])).max()) for j in range(M) for k in range(M)), default=0.0)
    if sample_points is None:
        sample_points = np.random.default_rng(seed).normal(size=(5, M))
    samp = 0.0
    for x in sample_points:
        hs = [h.H(j, x) for j in range(M)]
        for i in range(M):
            for j in range(M):
                samp = max(samp, float(np.abs(_comm(hs[i], hs[j])).max()))
    return IntegrabilityReport(sym, bcomm, eq7, eq8, samp, tol)


def check_good_family(fam: MTLZFamily) -> float:
    """Least |sin angle| between forms on two edges sharing a vertex (inf if none)."""
    g = fam.graph
    worst = math.inf
    for c in range(g.n):
        nb = g.neighbors(c)
        for i, a in enumerate(nb):
            for b in nb[i + 1:]:
                ea = g.edge_index[(min(a, c), max(a, c))]
                eb = g.edge_index[(min(b, c), max(b, c))]
                worst = min(worst, sin_angle(fam.forms[ea], fam.forms[eb]))
    return worst


# -- numerical search ---------------------------------------------------------

@dataclass
class SearchResult:
    family: MTLZFamily
    residual: float
    margin: float
    success: bool
    start: int
    integrability: IntegrabilityReport | None = None


def numeric_family_search(g: Graph, o: Orientation, eps=None, M: int = 2, seed: int = 0,
                          starts: int = 16, max_nfev: int = 400) -> SearchResult:
    """Least-squares search for forms and |gamma| on a sign-feasible orientation.

    Objective: closure of the vertex forms on non-tree edges, multipath sums,
    a hinge keeping forms at a shared vertex apart, and two normalisations
    (mean |Abar|^2 = 1, mean log|gamma| = 0). ``eps`` (a sign witness as
    (u, w, m) -> +-1) adds a hinge towards that path-sign pattern.
    Stops at the first start that succeeds; non-convergence is reported,
    not raised.
    """
    m = g.m
    rng = np.random.default_rng(seed)
    base = 0
    pairs = path_pairs(g)
    idx = g.edge_index
    pair_edges = [[(idx[(min(p.u, c), max(p.u, c))], idx[(min(p.w, c), max(p.w, c))], c) for c in p.mids]
                  for p in pairs]
    shared = []
    for c in range(g.n):
        nb = g.neighbors(c)
        for i, a in enumerate(nb):
            for b in nb[i + 1:]:
                shared.append((idx[(min(a, c), max(a, c))], idx[(min(b, c), max(b, c))]))
    iu = np.triu_indices(M)
    hinge = 0.15

    def unpack(z):
        return z[: m * M].reshape(m, M), z[m * M:]

    def fun(z):
        forms, y = unpack(z)
        _, closures = _propagate(g, o, forms, base, np.zeros((M, M)))
        out = [c[iu] for c in closures]
        root = np.exp(y)
        for p, terms in zip(pairs, pair_edges):
            out.append(sum(root[e1] * root[e2] * np.atleast_1d(wedge(forms[e1], forms[e2])) for e1, e2, _ in terms))
            if eps is not None:
                ws = [np.atleast_1d(wedge(forms[e1], forms[e2]))[0] /
                      (np.linalg.norm(forms[e1]) * np.linalg.norm(forms[e2]) + 1e-12) for e1, e2, _ in terms]
                ref = eps[(p.u, p.w, terms[0][2])] * ws[0]
                out.append(np.array([0.1 * max(0.0, 0.05 - eps[(p.u, p.w, c)] * w * np.sign(ref))
                                     for (_, _, c), w in zip(terms[1:], ws[1:])]))
        norms = np.linalg.norm(forms, axis=1)
        out.append(np.array([
            max(0.0, hinge - abs(float(np.linalg.norm(np.atleast_1d(wedge(forms[a], forms[b]))))) /
                (norms[a] * norms[b] + 1e-12))
            for a, b in shared]))
        out.append(np.array([np.mean(norms ** 2) - 1.0, y.mean()]))
        return np.concatenate([np.ravel(x) for x in out]) if out else np.zeros(1)

    best = None
    for k in range(starts):
        z0 = np.concatenate([rng.normal(size=m * M), rng.normal(scale=0.3, size=m)])
        sol = least_squares(fun, z0, xtol=1e-14, ftol=1e-14, gtol=1e-14, max_nfev=max_nfev)
        result = _evaluate(g, o, sol.x, m, M, seed, k)
        if best is None or (result.success, -result.residual) > (best.success, -best.residual):
            best = result
        if best.success:
            break
    return best


def _evaluate(g, o, z, m, M, seed, k) -> SearchResult:
    forms, y = z[: m * M].reshape(m, M), z[m * M:]
    gamma_abs = np.exp(2 * y)
    fam = make_family(g, o, forms, gamma_abs, params={"seed": seed, "start": k})
    _, closure = propagate_lambda(g, o, forms, tol=None)
    residual = max(closure, multipath_residual(g, forms, gamma_abs))
    margin = check_good_family(fam)
    report = check_integrability(assemble_hamiltonians(fam), tol=SEARCH_TOL)
    success = residual < SEARCH_TOL and margin > SEARCH_MARGIN and report.passed
    return SearchResult(fam, residual, margin, success, k, report)


# -- JSON -----------------------------------------------------------------------

SCHEMA_VERSION = 1


def family_to_dict(fam: MTLZFamily) -> dict:
    g = fam.graph
    return {
        "schema_version": SCHEMA_VERSION,
        "n": g.n,
        "M": fam.M,
        "vertices": [g.name(v) for v in range(g.n)],
        "edges": [
            {"u": a, "v": b, "s": fam.orientation.sign(a, b), "abs_gamma": float(fam.gamma_abs[e]),
             "gamma": float(fam.gamma(a, b)), "A_bar": [float(x) for x in fam.forms[e]],
             "A": [float(x) for x in fam.coupling(a, b)]}
            for e, (a, b) in enumerate(g.edge_list)
        ],
        "Lambda": [[[float(x) for x in row] for row in fam.lam[v]] for v in range(g.n)],
        "params": {k: (float(v) if isinstance(v, (int, float, np.floating)) else v) for k, v in fam.params.items()},
    }


def family_from_dict(d: dict) -> MTLZFamily:
    names = d.get("vertices")
    edges = [(e["u"], e["v"]) for e in d["edges"]]
    g = build_graph(d["n"], edges, names=names)
    arcs = [(e["u"], e["v"]) if e["s"] == -1 else (e["v"], e["u"]) for e in d["edges"]]
    o = from_arcs(g, arcs)
    by_edge = {(min(e["u"], e["v"]), max(e["u"], e["v"])): e for e in d["edges"]}
    forms = np.array([by_edge[e]["A_bar"] for e in g.edge_list], float).reshape(g.m, d["M"])
    gamma_abs = np.array([by_edge[e]["abs_gamma"] for e in g.edge_list], float)
    return MTLZFamily(g, o, np.array(d["Lambda"], float), forms, gamma_abs, dict(d.get("params", {})))


def family_to_json(fam: MTLZFamily) -> str:
    return json.dumps(family_to_dict(fam), indent=2)


def family_from_json(text: str) -> MTLZFamily:
    return family_from_dict(json.loads(text))
