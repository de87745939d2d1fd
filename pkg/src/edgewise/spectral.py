"""Electrical view of a weighted graph.

Dense exact-ish linear algebra (numpy eigendecomposition) for Laplacians,
effective resistances, leverage scores, resistance diameters, edge sampling
rates, and two-sided spectral approximation checks.  Desk scale: n up to a
few hundred vertices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .graph import Graph

KERNEL_REL_TOL = 1e-9
LEVERAGE_SUM_TOL = 1e-6


def laplacian(g: Graph) -> np.ndarray:
    """Dense Laplacian: degree matrix minus weighted adjacency."""
    L = np.zeros((g.n, g.n))
    for _, u, v, w in g.edges():
        wf = float(w)
        L[u, u] += wf
        L[v, v] += wf
        L[u, v] -= wf
        L[v, u] -= wf
    return L


def _eig(g: Graph):
    """Cached eigendecomposition of the Laplacian, kernel dimension checked."""
    cached = getattr(g, "_spectral_eig", None)
    if cached is not None:
        return cached
    L = laplacian(g)
    vals, vecs = np.linalg.eigh(L)
    top = max(float(vals[-1]), 0.0) if g.n else 0.0
    tol = KERNEL_REL_TOL * top if top > 0 else KERNEL_REL_TOL
    kernel_dim = int(np.sum(np.abs(vals) <= tol))
    n_comp = g.component_count()
    if kernel_dim != n_comp:
        raise RuntimeError(
            f"Laplacian kernel dimension {kernel_dim} != component count {n_comp}"
        )
    g._spectral_eig = (vals, vecs, kernel_dim)
    return g._spectral_eig


def pseudoinverse(g: Graph) -> np.ndarray:
    """Moore-Penrose pseudoinverse of the Laplacian."""
    cached = getattr(g, "_spectral_pinv", None)
    if cached is not None:
        return cached
    vals, vecs, kernel_dim = _eig(g)
    inv = np.zeros_like(vals)
    if kernel_dim < len(vals):
        inv[kernel_dim:] = 1.0 / vals[kernel_dim:]
    g._spectral_pinv = (vecs * inv) @ vecs.T
    return g._spectral_pinv


def effective_resistance(g: Graph, u: int, v: int) -> float:
    if u == v:
        return 0.0
    uf = g.union_find()
    if uf.find(u) != uf.find(v):
        raise ValueError(f"infinite resistance: {u} and {v} are in different components")
    P = pseudoinverse(g)
    return float(P[u, u] + P[v, v] - 2.0 * P[u, v])


def _pairwise_resistances(g: Graph) -> np.ndarray:
    P = pseudoinverse(g)
    d = np.diag(P)
    return d[:, None] + d[None, :] - 2.0 * P


@dataclass(frozen=True)
class ResistanceTable:
    """Per-edge electrical data plus per-component resistance diameters."""

    entries: dict  # eid -> (u, v, weight, reff, leverage)
    component_rdiam: tuple  # rdiam per component, component order of Graph.components()

    def resistance(self, eid: int) -> float:
        return self.entries[eid][3]

    def leverage(self, eid: int) -> float:
        return self.entries[eid][4]

    def max_leverage(self) -> float:
        return max((e[4] for e in self.entries.values()), default=0.0)

    def to_csv(self) -> str:
        lines = ["edge_index,u,v,w,reff,leverage"]
        for eid in sorted(self.entries):
            u, v, w, r, lev = self.entries[eid]
            lines.append(f"{eid},{u},{v},{w},{r!r},{lev!r}")
        return "\n".join(lines) + "\n"


def leverage_scores(g: Graph) -> ResistanceTable:
    """Effective resistance and leverage (weight times resistance) per edge.

    Enforces the sum rule: leverage scores inside one component add up to the
    component's vertex count minus one.
    """
    R = _pairwise_resistances(g)
    entries = {}
    comp_sum: dict[int, float] = {}
    uf = g.union_find()
    for eid, u, v, w in g.edges():
        reff = float(R[u, v])
        lev = float(w) * reff
        entries[eid] = (u, v, w, reff, lev)
        root = uf.find(u)
        comp_sum[root] = comp_sum.get(root, 0.0) + lev
    comps = g.components()
    rdiams = []
    for comp in comps:
        if len(comp) > 1:
            idx = np.asarray(comp)
            rdiams.append(float(R[np.ix_(idx, idx)].max()))
        else:
            rdiams.append(0.0)
        if len(comp) > 0:
            got = comp_sum.get(uf.find(comp[0]), 0.0)
            want = len(comp) - 1
            if abs(got - want) > LEVERAGE_SUM_TOL:
                raise RuntimeError(
                    f"leverage sum {got} != {want} on component {comp[:5]}..."
                )
    return ResistanceTable(entries=entries, component_rdiam=tuple(rdiams))


def resistance_diameter(g: Graph, vertex_subset=None) -> float:
    """Max pairwise effective resistance, computed on the induced subgraph."""
    if vertex_subset is None:
        sub = g
    else:
        sub, _ = g.induced_subgraph(vertex_subset)
    if sub.n <= 1:
        return 0.0
    if not sub.is_connected():
        raise ValueError("induced subgraph is disconnected")
    return float(_pairwise_resistances(sub).max())


@dataclass(frozen=True)
class SparsifyPlan:
    """Edge keep-probabilities for the sampling-based sparsifier."""

    s: float
    rates: dict  # eid -> probability in (0, 1]
    flags: tuple  # precondition deviations, empty when none

    def clamped(self) -> list[int]:
        return sorted(e for e, p in self.rates.items() if p == 1.0)


def sparsify_rates(
    g: Graph,
    resistances: ResistanceTable,
    k: int,
    epsilon: float,
    delta: float,
    rate_scale: float = 1.0,
) -> SparsifyPlan:
    """Per-edge keep probability min(1, w * Reff * s).

    The oversampling factor is s = (18 e log2(n) / eps^2) * (n/delta)^(2/k).
    The analyzed regime wants k even and k <= log2(n); calls outside it are
    allowed but flagged.  rate_scale multiplies s (desk-scale knob; flagged
    when not 1).
    """
    if not (0 < epsilon < 1):
        raise ValueError("epsilon must be in (0, 1)")
    if not (0 < delta < 0.5):
        raise ValueError("delta must be in (0, 1/2)")
    if k < 1:
        raise ValueError("k must be >= 1")
    flags = []
    if k % 2 == 1:
        flags.append("k_odd")
    if g.n >= 2 and k > math.log2(g.n):
        flags.append("k_above_log2_n")
    if rate_scale != 1.0:
        flags.append(f"rate_scale={rate_scale!r}")
    if g.n < 2:
        return SparsifyPlan(s=0.0, rates={}, flags=tuple(flags))
    s = (18.0 * math.e * math.log2(g.n) / epsilon**2) * (g.n / delta) ** (2.0 / k)
    s *= rate_scale
    rates = {}
    for eid, u, v, w in g.edges():
        rates[eid] = min(1.0, float(w) * resistances.resistance(eid) * s)
    return SparsifyPlan(s=s, rates=rates, flags=tuple(flags))


APPROX_SLACK = 1e-9


@dataclass(frozen=True)
class ApproxReport:
    ok: bool
    min_ratio: float
    max_ratio: float
    epsilon: float


def _ratio_verdict(lo: float, hi: float, epsilon: float) -> bool:
    return (lo >= 1.0 - epsilon - APPROX_SLACK) and (hi <= 1.0 + epsilon + APPROX_SLACK)


def spectral_approx_check(g: Graph, h: Graph, epsilon: float) -> ApproxReport:
    """Two-sided check: the quadratic form of h within (1 +- eps) of g's.

    Restricted to the image of g's Laplacian via generalized eigenvalues.
    h must live on g's vertex set; an edge of h crossing between components
    of g is an error (the comparison is not defined there).
    """
    if g.n != h.n:
        raise ValueError("vertex sets differ")
    uf = g.union_find()
    for eid, u, v, _ in h.edges():
        if uf.find(u) != uf.find(v):
            raise ValueError(f"edge {eid} of h crosses components of g")
    vals, vecs, kernel_dim = _eig(g)
    if kernel_dim == g.n:
        # g has no edges; h is then also empty (checked above)
        return ApproxReport(ok=True, min_ratio=1.0, max_ratio=1.0, epsilon=epsilon)
    U = vecs[:, kernel_dim:]
    d = vals[kernel_dim:]
    M = U.T @ laplacian(h) @ U
    S = M / np.sqrt(d)[:, None] / np.sqrt(d)[None, :]
    ratios = np.linalg.eigvalsh(S)
    lo, hi = float(ratios[0]), float(ratios[-1])
    ok = _ratio_verdict(lo, hi, epsilon)
    return ApproxReport(ok=ok, min_ratio=lo, max_ratio=hi, epsilon=epsilon)


@dataclass(frozen=True)
class FormChecker:
    """Prepared comparison against one graph's quadratic form.

    Holds the normalized rank-one form of every edge so that reweighted
    subsamples can be checked without rebuilding graphs or re-solving the
    base eigenproblem.  Subsample forms are linear in the edge weights:
    stack[i] is edge edge_order[i]'s contribution at weight 1.
    """

    epsilon: float
    edge_order: tuple
    stack: np.ndarray  # (m, r, r)

    _CHUNK = 1 << 14

    def check(self, weights) -> ApproxReport:
        """weights: mapping edge id -> weight of the subsample (missing = 0)."""
        row = np.array(
            [float(weights.get(eid, 0)) for eid in self.edge_order]
        ).reshape(1, -1)
        ok, lo, hi = self.batch_verdicts(row)
        return ApproxReport(
            ok=bool(ok[0]), min_ratio=float(lo[0]), max_ratio=float(hi[0]),
            epsilon=self.epsilon,
        )

    def batch_verdicts(self, weight_rows: np.ndarray):
        """Vectorized verdicts for many subsamples at once.

        weight_rows[j, i] is the weight of edge edge_order[i] in subsample
        j (0 = dropped).  Returns (ok, min_ratio, max_ratio) arrays.
        """
        rows = weight_rows.shape[0]
        m, r, _ = self.stack.shape
        flat = self.stack.reshape(m, r * r)
        lo = np.empty(rows)
        hi = np.empty(rows)
        for start in range(0, rows, self._CHUNK):
            chunk = weight_rows[start : start + self._CHUNK]
            mats = (chunk @ flat).reshape(-1, r, r)
            ratios = np.linalg.eigvalsh(mats)
            lo[start : start + self._CHUNK] = ratios[:, 0]
            hi[start : start + self._CHUNK] = ratios[:, -1]
        ok = (lo >= 1.0 - self.epsilon - APPROX_SLACK) & (
            hi <= 1.0 + self.epsilon + APPROX_SLACK
        )
        return ok, lo, hi


def edge_form_checker(g: Graph, epsilon: float) -> FormChecker:
    """Prepare a FormChecker for g (g must have at least one edge)."""
    vals, vecs, kernel_dim = _eig(g)
    if kernel_dim == g.n:
        raise ValueError("the reference graph has no edges to compare against")
    U = vecs[:, kernel_dim:]
    d = vals[kernel_dim:]
    order = tuple(g.edge_ids())
    mats = np.empty((len(order), U.shape[1], U.shape[1]))
    scale = np.sqrt(d)
    for i, eid in enumerate(order):
        u, v, _ = g.edge(eid)
        b = (U[u] - U[v]) / scale
        mats[i] = np.outer(b, b)
    return FormChecker(epsilon=epsilon, edge_order=order, stack=mats)


def solve_potentials(g: Graph, demand) -> np.ndarray:
    """Vertex potentials for the given external currents (L x = demand).

    The demand must balance to zero on every component.
    """
    b = np.asarray(demand, dtype=float)
    if b.shape != (g.n,):
        raise ValueError("demand must have one entry per vertex")
    for comp in g.components():
        if abs(b[comp].sum()) > 1e-9:
            raise ValueError(f"demand does not balance on component {comp[:5]}")
    return pseudoinverse(g) @ b


def flow_energy(g: Graph, demand) -> float:
    """Electrical energy of the unique electric flow with these currents."""
    b = np.asarray(demand, dtype=float)
    x = solve_potentials(g, b)
    return float(b @ x)
