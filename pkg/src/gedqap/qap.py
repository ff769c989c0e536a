"""GED as a quadratic assignment problem, minimized by integer projected fixed point.

For an epsilon-assignment matrix ``x`` (rows: nodes of the first graph then
insertion dummies; columns: nodes of the second graph then removal dummies)
the edit cost is ``S(x) = 1/2 x' Delta x + c' x``.  ``c`` holds node costs.
``Delta`` holds pairwise edge costs: for a pair of mappings
``i -> k`` and ``j -> l`` the entry is the substitution cost of
``(i, j) -> (k, l)`` when both edges exist, the removal cost of ``(i, j)`` or
the insertion cost of ``(k, l)`` when only one exists, and zero otherwise.
Directed graphs use ``D + D'`` so that ``Delta`` stays symmetric.

``Delta`` has ``(n+m)^4`` entries and is never built.  Products ``x' Delta``
are assembled from a handful of ``(n+m) x (n+m)`` matrix products with the
zero-padded adjacency matrices, one term per edge label of the first graph.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .bipartite import bipartite_ged
from .costs import CostModel
from .editpath import (EpsAssignment, RestrictedEditPath, assignment_to_path,
                       check_same_kind, path_cost)
from .graph import Graph
from .lsap import MaskedCostMatrix, eps_allowed_mask, solve_lsap

__all__ = [
    "QapInstance",
    "IpfpResult",
    "QapResult",
    "quad_cost",
    "delta_cost",
    "objective",
    "linearize",
    "ipfp_min",
    "qap_ged",
    "random_eps_assignment",
]

INITS = {"random": "random", "bnode": "node", "bipartite-node": "node",
         "bedges": "edges", "bipartite-edges": "edges"}


@dataclass(frozen=True, eq=False)
class _EdgeTerms:
    adj1: np.ndarray
    adj2: np.ndarray
    del1: np.ndarray
    ins2: np.ndarray
    subs: list[tuple[np.ndarray, np.ndarray]]


def _edge_terms(g1: Graph, g2: Graph, model: CostModel, size: int, transpose: bool) -> _EdgeTerms:
    def arcs(g):
        return {((v, u) if transpose else (u, v)): lab for (u, v), lab in g.arcs.items()}

    a1, a2 = arcs(g1), arcs(g2)
    adj1, adj2 = np.zeros((size, size)), np.zeros((size, size))
    del1, ins2 = np.zeros((size, size)), np.zeros((size, size))
    for (u, v), lab in a1.items():
        adj1[u, v] = 1.0
        del1[u, v] = model.edge_del(lab)
    for (u, v), lab in a2.items():
        adj2[u, v] = 1.0
        ins2[u, v] = model.edge_ins(lab)
    subs = []
    for lab1 in sorted(set(a1.values())):
        ind = np.zeros((size, size))
        for (u, v), lab in a1.items():
            if lab == lab1:
                ind[u, v] = 1.0
        cost2 = np.zeros((size, size))
        for (u, v), lab in a2.items():
            cost2[u, v] = model.edge_sub(lab1, lab)
        subs.append((ind, cost2))
    return _EdgeTerms(adj1, adj2, del1, ins2, subs)


@dataclass(frozen=True, eq=False)
class QapInstance:
    g1: Graph
    g2: Graph
    model: CostModel
    c: np.ndarray
    forbidden: np.ndarray
    _terms: list = field(repr=False)

    @classmethod
    def from_graphs(cls, g1: Graph, g2: Graph, model: CostModel) -> "QapInstance":
        check_same_kind(g1, g2)
        n, m = g1.n, g2.n
        size = n + m
        c = np.zeros((size, size))
        for i, a in enumerate(g1.labels):
            for k, b in enumerate(g2.labels):
                c[i, k] = model.node_sub(a, b)
            c[i, m + i] = model.node_del(a)
        for k, b in enumerate(g2.labels):
            c[n + k, k] = model.node_ins(b)
        terms = [_edge_terms(g1, g2, model, size, transpose=False)]
        if g1.directed:
            terms.append(_edge_terms(g1, g2, model, size, transpose=True))
        return cls(g1, g2, model, c, ~eps_allowed_mask(n, m), terms)

    @property
    def n(self) -> int:
        return self.g1.n

    @property
    def m(self) -> int:
        return self.g2.n

    @property
    def size(self) -> int:
        return self.g1.n + self.g2.n

    @property
    def symmetrize(self) -> bool:
        return self.g1.directed

    def allowed(self, i: int, k: int) -> bool:
        n, m = self.n, self.m
        if i < n:
            return k < m or k == m + i
        return k >= m or k == i - n


def quad_cost(inst: QapInstance, i: int, k: int, j: int, l: int) -> float | None:
    """Pairwise cost of mapping ``i -> k`` together with ``j -> l``; ``None`` if forbidden."""
    size = inst.size
    if not all(0 <= idx < size for idx in (i, k, j, l)):
        raise IndexError(f"index out of range for augmented size {size}")
    if not (inst.allowed(i, k) and inst.allowed(j, l)):
        return None
    n, m, model = inst.n, inst.m, inst.model
    e1 = inst.g1.arcs.get((i, j)) if i < n and j < n else None
    e2 = inst.g2.arcs.get((k, l)) if k < m and l < m else None
    if e1 is not None and e2 is not None:
        return model.edge_sub(e1, e2)
    if e1 is not None:
        return model.edge_del(e1)
    if e2 is not None:
        return model.edge_ins(e2)
    return 0.0


def delta_cost(inst: QapInstance, i: int, k: int, j: int, l: int) -> float | None:
    """Entry of the symmetric quadratic matrix actually minimized."""
    d = quad_cost(inst, i, k, j, l)
    if d is None or not inst.symmetrize:
        return d
    return d + quad_cost(inst, j, l, i, k)


def _quad_product(inst: QapInstance, x: np.ndarray) -> np.ndarray:
    """``x' Delta`` reshaped to a matrix, for ``x`` supported on allowed entries."""
    r = x.sum(axis=1)
    s = x.sum(axis=0)
    out = np.zeros_like(x)
    for t in inst._terms:
        for ind, cost2 in t.subs:
            out += ind.T @ x @ cost2
        out += (t.del1.T @ r)[:, None] - t.del1.T @ x @ t.adj2
        out += (t.ins2.T @ s)[None, :] - t.adj1.T @ x @ t.ins2
    return out


def _as_matrix(inst: QapInstance, x) -> np.ndarray:
    if isinstance(x, EpsAssignment):
        if x.n != inst.n or x.m != inst.m:
            raise ValueError("assignment does not match the instance sizes")
        return x.to_matrix()
    x = np.asarray(x, dtype=float)
    if x.shape != (inst.size, inst.size):
        raise ValueError(f"expected a {inst.size}x{inst.size} matrix")
    return x


def _check_support(inst: QapInstance, x: np.ndarray) -> None:
    if np.any(x[inst.forbidden] != 0):
        raise ValueError("x has support on forbidden entries")


def objective(inst: QapInstance, x) -> float:
    """``1/2 x' Delta x + c' x`` for an assignment or a point of the relaxed polytope."""
    x = _as_matrix(inst, x)
    _check_support(inst, x)
    return float(0.5 * np.sum(x * _quad_product(inst, x)) + np.sum(inst.c * x))


def linearize(inst: QapInstance, x) -> MaskedCostMatrix:
    """Gradient ``x' Delta + c'`` as a masked LSAP cost matrix."""
    x = _as_matrix(inst, x)
    _check_support(inst, x)
    grad = _quad_product(inst, x) + inst.c
    grad[inst.forbidden] = 0.0
    return MaskedCostMatrix(grad, inst.forbidden)


def random_eps_assignment(n: int, m: int, rng: np.random.Generator) -> EpsAssignment:
    """Uniform permutation of the augmented sets; rows hitting a wrong dummy become removals."""
    return EpsAssignment.from_perm(rng.permutation(n + m), n, m)


@dataclass(frozen=True)
class IpfpResult:
    assignment: EpsAssignment
    value: float
    iterations: int
    trace: tuple[float, ...]
    continuous_value: float
    projected: bool
    best_binary: EpsAssignment
    best_binary_value: float


def _perm_matrix(perm, size: int) -> np.ndarray:
    b = np.zeros((size, size))
    b[np.arange(size), perm] = 1.0
    return b


def ipfp_min(inst: QapInstance, x0, k_max: int = 40, tol: float = 1e-9) -> IpfpResult:
    """Minimize the QAP objective from ``x0`` by alternating LSAP and exact line search.

    Each iteration solves an LSAP on the gradient to get a vertex ``b``, then
    minimizes the quadratic exactly on the segment ``[x, b]``.  Stops at a
    fixed point or after ``k_max`` iterations.  A continuous final point is
    projected to the epsilon-assignment with the largest inner product.
    """
    if k_max < 1:
        raise ValueError("k_max must be at least 1")
    size, n, m = inst.size, inst.n, inst.m
    x = _as_matrix(inst, x0)
    _check_support(inst, x)
    if not (np.allclose(x.sum(axis=0), 1) and np.allclose(x.sum(axis=1), 1)) or np.any(x < 0):
        raise ValueError("x0 must lie in the assignment polytope")
    # the dummy-to-dummy block never carries cost; fixed points are compared outside it
    relevant = np.ones((size, size), dtype=bool)
    relevant[n:, m:] = False

    quad = _quad_product(inst, x)
    lin = float(np.sum(inst.c * x))
    s = 0.5 * float(np.sum(x * quad)) + lin
    trace = [s]
    is_binary = bool(np.all((np.abs(x) <= tol) | (np.abs(x - 1) <= tol)))
    best_x, best_s = (x, s) if is_binary else (None, np.inf)
    k = 0
    while k < k_max:
        sol = solve_lsap(MaskedCostMatrix(np.where(inst.forbidden, 0.0, quad + inst.c), inst.forbidden))
        b = _perm_matrix(sol.perm, size)
        r_b = sol.total_cost
        quad_b = _quad_product(inst, b)
        lin_b = float(np.sum(inst.c * b))
        s_b = 0.5 * float(np.sum(b * quad_b)) + lin_b
        if s_b < best_s:
            best_x, best_s = b, s_b
        alpha = r_b - 2.0 * s + lin
        beta = s_b + s - r_b - lin
        t0 = -alpha / (2.0 * beta) if beta > 0 else np.inf
        if beta <= 0 or t0 >= 1:
            x_new, s, lin, quad = b, s_b, lin_b, quad_b
        else:
            t0 = max(t0, 0.0)
            x_new = x + t0 * (b - x)
            s = s - alpha * alpha / (4.0 * beta)
            quad = quad + t0 * (quad_b - quad)
            lin = float(np.sum(inst.c * x_new))
        k += 1
        trace.append(s)
        step = float(np.max(np.abs(x_new - x)[relevant])) if size else 0.0
        x = x_new
        if step <= tol:
            break
    continuous_value = s
    is_binary = bool(np.all((np.abs(x) <= tol) | (np.abs(x - 1) <= tol)))
    if is_binary:
        final = EpsAssignment.from_matrix(x, n, m)
        projected = False
    else:
        sol = solve_lsap(MaskedCostMatrix(np.where(inst.forbidden, 0.0, -x), inst.forbidden))
        final = EpsAssignment.from_perm(sol.perm, n, m)
        projected = True
    value = objective(inst, final)
    best = EpsAssignment.from_matrix(best_x, n, m) if best_x is not None else final
    best_value = min(best_s, value) if best_x is not None else value
    if best_x is not None and value < best_s:
        best = final
    return IpfpResult(final, value, k, tuple(trace), continuous_value, projected, best, best_value)


@dataclass(frozen=True)
class QapResult:
    value: float
    path: RestrictedEditPath
    assignment: EpsAssignment
    stats: dict


def qap_ged(g1: Graph, g2: Graph, m: CostModel, init: str = "bedges", restarts: int = 1,
            k_max: int = 40, tol: float = 1e-9, seed: int | None = 0) -> QapResult:
    """Approximate GED by IPFP from one or more starting assignments.

    With a bipartite ``init`` the first run starts from the bipartite
    assignment (node-only or incident-edges costs) and the remaining
    ``restarts - 1`` runs from seeded random assignments; with
    ``init="random"`` all runs are random.  The cheapest edit path found is
    returned, including the binary LSAP vertices visited along the way.
    """
    if restarts < 1:
        raise ValueError("restarts must be at least 1")
    if init not in INITS:
        raise ValueError(f"unknown init {init!r}; choose from {sorted(INITS)}")
    inst = QapInstance.from_graphs(g1, g2, m)
    rng = np.random.default_rng(seed)
    starts = []
    if INITS[init] != "random":
        starts.append(bipartite_ged(g1, g2, m, INITS[init]).assignment)
    while len(starts) < restarts:
        starts.append(random_eps_assignment(g1.n, g2.n, rng))

    runs = [ipfp_min(inst, x0, k_max=k_max, tol=tol) for x0 in starts]
    best_run = min(range(len(runs)), key=lambda r: runs[r].best_binary_value)
    best = runs[best_run].best_binary
    path = assignment_to_path(best, g1, g2)
    value = path_cost(path, m, g1, g2)
    stats = {
        "iterations": sum(r.iterations for r in runs),
        "best_run": best_run,
        "run_values": [r.value for r in runs],
        "continuous_values": [r.continuous_value for r in runs],
        "projected": [r.projected for r in runs],
        "traces": [r.trace for r in runs],
        "objective": runs[best_run].best_binary_value,
    }
    return QapResult(value, path, best, stats)
