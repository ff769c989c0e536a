"""Exact GED: best-first search over node mappings and an exhaustive oracle."""

from __future__ import annotations

import heapq
import itertools
import time
from dataclasses import dataclass

import numpy as np

from .bipartite import bipartite_ged
from .costs import CostModel
from .editpath import (EpsAssignment, RestrictedEditPath, assignment_to_path,
                       check_same_kind, path_cost)
from .graph import Graph
from .lsap import MaskedCostMatrix, eps_allowed_mask, solve_lsap

__all__ = ["ExactResult", "astar_ged", "brute_force_ged"]

BRUTE_FORCE_MAX = 8
DEFAULT_BUDGET = 10_000_000


@dataclass(frozen=True)
class ExactResult:
    value: float
    path: RestrictedEditPath
    assignment: EpsAssignment
    optimal: bool
    expanded: int


def _eps_lsap(cost_sub, cost_del, cost_ins) -> float:
    a, b = len(cost_del), len(cost_ins)
    if a == 0:
        return float(sum(cost_ins))
    if b == 0:
        return float(sum(cost_del))
    size = a + b
    cost = np.zeros((size, size))
    cost[:a, :b] = cost_sub
    cost[np.arange(a), b + np.arange(a)] = cost_del
    cost[a + np.arange(b), np.arange(b)] = cost_ins
    return solve_lsap(MaskedCostMatrix(cost, ~eps_allowed_mask(a, b))).total_cost


class _Search:
    def __init__(self, g1: Graph, g2: Graph, m: CostModel, heuristic: bool):
        self.g1, self.g2, self.m = g1, g2, m
        n1, n2 = g1.n, g2.n
        # high-degree nodes first: their edges get priced early
        self.order = sorted(range(n1), key=lambda u: (-g1.degree(u), u))
        self.heuristic = heuristic
        self.sub = np.array([[m.node_sub(a, b) for b in g2.labels] for a in g1.labels]).reshape(n1, n2)
        self.dele = np.array([m.node_del(a) for a in g1.labels])
        self.ins = np.array([m.node_ins(b) for b in g2.labels])
        self.e1 = list(g1.edges())
        self.e2 = list(g2.edges())
        self._h_cache: dict = {}

    def step_cost(self, mapping: dict, u: int, k: int | None) -> float:
        """Cost of the operations fixed by deciding ``u -> k`` after ``mapping``."""
        g1, g2, m = self.g1, self.g2, self.m
        cost = self.dele[u] if k is None else self.sub[u, k]
        for w, kw in mapping.items():
            pairs = [(u, w, k, kw)]
            if g1.directed:
                pairs.append((w, u, kw, k))
            for a, b, ka, kb in pairs:
                lab1 = g1.arcs.get((a, b))
                lab2 = g2.arcs.get((ka, kb)) if ka is not None and kb is not None else None
                if lab1 is not None:
                    cost += m.edge_del(lab1) if lab2 is None else m.edge_sub(lab1, lab2)
                elif lab2 is not None:
                    cost += m.edge_ins(lab2)
        return cost

    def completion_cost(self, mapping: dict, used: int) -> float:
        """Insert the unused second-graph nodes and every edge touching them."""
        g2, m = self.g2, self.m
        cost = sum(self.ins[k] for k in range(g2.n) if not used >> k & 1)
        for k, l, lab in self.e2:
            if not (used >> k & 1 and used >> l & 1):
                cost += m.edge_ins(lab)
        return cost

    def h(self, depth: int, used: int) -> float:
        if not self.heuristic:
            return 0.0
        key = (depth, used)
        if key in self._h_cache:
            return self._h_cache[key]
        rest1 = self.order[depth:]
        rest2 = [k for k in range(self.g2.n) if not used >> k & 1]
        est = _eps_lsap(self.sub[np.ix_(rest1, rest2)], self.dele[rest1], self.ins[rest2])
        # edges touching an undecided node can only be priced against edges touching an unused node
        r1, r2 = set(rest1), set(rest2)
        lab1 = [lab for u, v, lab in self.e1 if u in r1 or v in r1]
        lab2 = [lab for k, l, lab in self.e2 if k in r2 or l in r2]
        m = self.m
        if lab1 or lab2:
            est += _eps_lsap(np.array([[m.edge_sub(a, b) for b in lab2] for a in lab1]).reshape(len(lab1), len(lab2)),
                             [m.edge_del(a) for a in lab1], [m.edge_ins(b) for b in lab2])
        self._h_cache[key] = est
        return est


def astar_ged(g1: Graph, g2: Graph, m: CostModel, budget: int = DEFAULT_BUDGET,
              time_limit: float | None = None, heuristic: bool = True) -> ExactResult:
    """Exact GED by A* over partial node mappings.

    Nodes of the first graph are decided one at a time (to a free node of the
    second graph or to removal).  The lower bound is the sum of two
    epsilon-assignment problems over the undecided nodes and over the edges
    touching them.  When ``budget`` expansions or ``time_limit`` seconds are
    exhausted, the best complete mapping found so far is returned with
    ``optimal=False``.
    """
    check_same_kind(g1, g2)
    search = _Search(g1, g2, m, heuristic)
    n1 = g1.n
    order = search.order
    start = time.perf_counter()

    if n1 == 0:
        a = EpsAssignment.empty(0, g2.n)
        path = assignment_to_path(a, g1, g2)
        return ExactResult(path_cost(path, m, g1, g2), path, a, True, 0)
    incumbent = bipartite_ged(g1, g2, m, "edges")
    best_value, best_assignment = incumbent.value, incumbent.assignment

    counter = itertools.count()
    # entries: (f, -depth, tiebreak, g, depth, used, mapping tuple in search order, done)
    heap = [(search.h(0, 0), 0, next(counter), 0.0, 0, 0, (), False)]
    expanded = 0
    optimal = True
    while heap:
        f, _neg, _tb, g, depth, used, decided, done = heapq.heappop(heap)
        if f >= best_value:
            break
        if done:
            mapping = dict(zip(order, decided))
            best_value = g
            best_assignment = EpsAssignment.from_dict(
                {u: k for u, k in mapping.items() if k is not None}, n1, g2.n)
            break
        if expanded >= budget or (time_limit is not None and time.perf_counter() - start > time_limit):
            optimal = False
            break
        expanded += 1
        mapping = dict(zip(order, decided))
        u = order[depth]
        for k in [k for k in range(g2.n) if not used >> k & 1] + [None]:
            g_child = g + search.step_cost(mapping, u, k)
            used_child = used if k is None else used | (1 << k)
            if depth + 1 == n1:
                g_child += search.completion_cost({**mapping, u: k}, used_child)
                f_child, is_done = g_child, True
            else:
                f_child, is_done = g_child + search.h(depth + 1, used_child), False
            if f_child < best_value:
                heapq.heappush(heap, (f_child, -(depth + 1), next(counter), g_child,
                                      depth + 1, used_child, decided + (k,), is_done))
    path = assignment_to_path(best_assignment, g1, g2)
    return ExactResult(path_cost(path, m, g1, g2), path, best_assignment, optimal, expanded)


def _all_mappings(n1: int, n2: int) -> np.ndarray:
    """Every injective partial mapping as rows of targets, ``n2`` standing for removal."""
    rows = np.zeros((1, 0), dtype=np.intp)
    for _ in range(n1):
        parts = [np.hstack([rows, np.full((len(rows), 1), n2, dtype=np.intp)])]
        for k in range(n2):
            keep = rows[~np.any(rows == k, axis=1)]
            parts.append(np.hstack([keep, np.full((len(keep), 1), k, dtype=np.intp)]))
        rows = np.vstack(parts)
    return rows


def brute_force_ged(g1: Graph, g2: Graph, m: CostModel, max_size: int = BRUTE_FORCE_MAX) -> float:
    """Minimum restricted-path cost over every injective partial node mapping (test oracle).

    All mappings are enumerated at once and scored with the closed-form sum
    of node and edge operation costs.  Callers wanting the GED over all
    edit paths should pass a model processed by
    :func:`gedqap.costs.clamp_substitutions`.
    """
    check_same_kind(g1, g2)
    n1, n2 = g1.n, g2.n
    if max(n1, n2) > max_size:
        raise ValueError(f"brute force limited to graphs of at most {max_size} nodes")
    ins = [m.node_ins(b) for b in g2.labels]
    base = sum(ins) + sum(m.edge_ins(lab) for _k, _l, lab in g2.edges())
    if n1 == 0:
        return float(base)
    # column n2 is removal; a substitution to k refunds the insertion of k
    node = np.zeros((n1, n2 + 1))
    for i, a in enumerate(g1.labels):
        node[i, :n2] = [m.node_sub(a, b) - ins[k] for k, b in enumerate(g2.labels)]
        node[i, n2] = m.node_del(a)
    maps = _all_mappings(n1, n2)
    total = node[np.arange(n1), maps].sum(axis=1) + base
    for i, j, lab in g1.edges():
        table = np.full((n2 + 1, n2 + 1), m.edge_del(lab))
        for (k, l), lab2 in g2.arcs.items():
            table[k, l] = m.edge_sub(lab, lab2) - m.edge_ins(lab2)
        total += table[maps[:, i], maps[:, j]]
    return float(total.min())
