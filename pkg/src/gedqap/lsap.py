"""Linear sum assignment with forbidden entries.

Forbidden entries are never given a cost: the Hungarian scan simply does not
look at them, so results do not depend on any "large value" convention.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .costs import CostModel
from .graph import Graph

__all__ = [
    "MaskedCostMatrix",
    "Assignment",
    "InfeasibleError",
    "solve_lsap",
    "brute_force_lsap",
    "eps_allowed_mask",
    "build_eps_cost_matrix",
    "bag_cost",
]

BRUTE_FORCE_MAX = 9


class InfeasibleError(ValueError):
    """No complete assignment avoids the forbidden entries."""


@dataclass(frozen=True, eq=False)
class MaskedCostMatrix:
    cost: np.ndarray
    forbidden: np.ndarray

    def __post_init__(self):
        cost = np.asarray(self.cost, dtype=float)
        forbidden = np.asarray(self.forbidden, dtype=bool)
        if cost.ndim != 2 or cost.shape[0] != cost.shape[1] or forbidden.shape != cost.shape:
            raise ValueError("cost and forbidden must be square arrays of the same shape")
        if not np.all(np.isfinite(cost[~forbidden])):
            raise ValueError("allowed costs must be finite")
        object.__setattr__(self, "cost", cost)
        object.__setattr__(self, "forbidden", forbidden)

    @classmethod
    def dense(cls, cost) -> "MaskedCostMatrix":
        cost = np.asarray(cost, dtype=float)
        return cls(cost, np.zeros(cost.shape, dtype=bool))

    @property
    def n(self) -> int:
        return self.cost.shape[0]


@dataclass(frozen=True)
class Assignment:
    perm: tuple[int, ...]
    total_cost: float


def solve_lsap(c: MaskedCostMatrix) -> Assignment:
    """Minimum-cost perfect assignment by the O(n^3) shortest augmenting path method.

    Rows are inserted one at a time; for each row a Dijkstra-like scan over
    reduced costs grows an alternating tree until a free column is reached.
    Ties resolve to the lowest column index.  Raises :class:`InfeasibleError`
    when the forbidden pattern admits no perfect matching.
    """
    n = c.n
    if n == 0:
        return Assignment((), 0.0)
    # inf marks entries the scan must skip; they never enter a potential update
    work = np.where(c.forbidden, np.inf, c.cost)
    u = np.zeros(n + 1)
    v = np.zeros(n + 1)
    p = np.zeros(n + 1, dtype=np.intp)   # p[j]: 1-based row matched to column j
    way = np.zeros(n + 1, dtype=np.intp)
    for i in range(1, n + 1):
        p[0] = i
        j0 = 0
        minv = np.full(n + 1, np.inf)
        used = np.zeros(n + 1, dtype=bool)
        while True:
            used[j0] = True
            i0 = p[j0]
            cur = work[i0 - 1] - u[i0] - v[1:]
            free = ~used[1:]
            better = free & (cur < minv[1:])
            minv[1:][better] = cur[better]
            way[1:][better] = j0
            cand = np.where(free, minv[1:], np.inf)
            j1 = int(np.argmin(cand)) + 1
            delta = cand[j1 - 1]
            if not np.isfinite(delta):
                raise InfeasibleError(f"row {i - 1} cannot be completed to a full assignment")
            u[p[used]] += delta
            v[used] -= delta
            minv[~used] -= delta
            j0 = j1
            if p[j0] == 0:
                break
        while j0:
            j1 = way[j0]
            p[j0] = p[j1]
            j0 = j1
    perm = [0] * n
    for j in range(1, n + 1):
        perm[p[j] - 1] = j - 1
    total = float(sum(c.cost[i, perm[i]] for i in range(n)))
    return Assignment(tuple(perm), total)


@lru_cache(maxsize=None)
def _all_perms(n: int) -> np.ndarray:
    return np.array(list(itertools.permutations(range(n))), dtype=np.intp).reshape(-1, n)


def brute_force_lsap(c: MaskedCostMatrix) -> Assignment:
    """Exhaustive enumeration of all n! permutations (test oracle, n <= 9)."""
    n = c.n
    if n > BRUTE_FORCE_MAX:
        raise ValueError(f"brute force limited to n <= {BRUTE_FORCE_MAX}, got {n}")
    if n == 0:
        return Assignment((), 0.0)
    perms = _all_perms(n)
    rows = np.arange(n)
    bad = c.forbidden[rows, perms].any(axis=1)
    if bad.all():
        raise InfeasibleError("every permutation uses a forbidden entry")
    totals = c.cost[rows, perms].sum(axis=1)
    totals[bad] = np.inf
    best = int(np.argmin(totals))
    return Assignment(tuple(int(k) for k in perms[best]), float(totals[best]))


def eps_allowed_mask(n: int, m: int) -> np.ndarray:
    """Allowed entries of an (n+m) x (n+m) epsilon-assignment matrix.

    Rows ``0..n-1`` are the nodes of the first graph and rows ``n+k`` the
    dummies used to insert node ``k`` of the second graph.  Columns
    ``0..m-1`` are the nodes of the second graph and columns ``m+i`` the
    dummies used to remove node ``i`` of the first graph.
    """
    size = n + m
    allowed = np.zeros((size, size), dtype=bool)
    allowed[:n, :m] = True
    allowed[np.arange(n), m + np.arange(n)] = True
    allowed[n + np.arange(m), np.arange(m)] = True
    allowed[n:, m:] = True
    return allowed


def _label_eps_lsap(bag1: list[str], bag2: list[str], sub, dele, ins) -> float:
    """Optimal epsilon-assignment cost between two label multisets."""
    a, b = len(bag1), len(bag2)
    if a == 0:
        return float(sum(ins(y) for y in bag2))
    if b == 0:
        return float(sum(dele(x) for x in bag1))
    cost = np.zeros((a + b, a + b))
    cost[:a, :b] = [[sub(x, y) for y in bag2] for x in bag1]
    cost[np.arange(a), b + np.arange(a)] = [dele(x) for x in bag1]
    cost[a + np.arange(b), np.arange(b)] = [ins(y) for y in bag2]
    return solve_lsap(MaskedCostMatrix(cost, ~eps_allowed_mask(a, b))).total_cost


def _bags(g: Graph, u: int) -> list[list[str]]:
    if g.directed:
        return [sorted(lab for _v, lab in g.out_arcs(u)), sorted(lab for _v, lab in g.in_arcs(u))]
    return [sorted(lab for _v, lab in g.out_arcs(u))]


def bag_cost(bags1: list[list[str]], bags2: list[list[str]], m: CostModel) -> float:
    """Edit cost between incident-edge bags (in and out bags matched separately)."""
    return sum(_label_eps_lsap(x, y, m.edge_sub, m.edge_del, m.edge_ins)
               for x, y in zip(bags1, bags2))


def build_eps_cost_matrix(g1: Graph, g2: Graph, m: CostModel, strategy: str = "node") -> MaskedCostMatrix:
    """Cost matrix of node epsilon-assignments for the bipartite approximation.

    ``strategy="node"`` uses node costs only.  ``strategy="edges"`` adds, to
    each substitution, the optimal edit cost between the incident-edge label
    bags of the two nodes, and to each deletion/insertion the cost of
    deleting/inserting all incident edges.
    """
    if strategy not in ("node", "edges"):
        raise ValueError(f"unknown strategy {strategy!r}")
    n, mm = g1.n, g2.n
    size = n + mm
    cost = np.zeros((size, size))
    for i, a in enumerate(g1.labels):
        for k, b in enumerate(g2.labels):
            cost[i, k] = m.node_sub(a, b)
        cost[i, mm + i] = m.node_del(a)
    for k, b in enumerate(g2.labels):
        cost[n + k, k] = m.node_ins(b)
    if strategy == "edges":
        bags1 = [_bags(g1, i) for i in range(n)]
        bags2 = [_bags(g2, k) for k in range(mm)]
        memo: dict = {}
        for i in range(n):
            key1 = tuple(map(tuple, bags1[i]))
            for k in range(mm):
                key = (key1, tuple(map(tuple, bags2[k])))
                if key not in memo:
                    memo[key] = bag_cost(bags1[i], bags2[k], m)
                cost[i, k] += memo[key]
            cost[i, mm + i] += sum(m.edge_del(lab) for bag in bags1[i] for lab in bag)
        for k in range(mm):
            cost[n + k, k] += sum(m.edge_ins(lab) for bag in bags2[k] for lab in bag)
    forbidden = ~eps_allowed_mask(n, mm)
    cost[forbidden] = 0.0
    return MaskedCostMatrix(cost, forbidden)
