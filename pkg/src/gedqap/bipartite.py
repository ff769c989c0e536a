"""Bipartite GED: an upper bound from a single node assignment problem."""

from __future__ import annotations

from dataclasses import dataclass

from .costs import CostModel
from .editpath import (EpsAssignment, RestrictedEditPath, assignment_to_path,
                       check_same_kind, path_cost)
from .graph import Graph
from .lsap import build_eps_cost_matrix, solve_lsap

__all__ = ["BipartiteResult", "bipartite_ged"]


@dataclass(frozen=True)
class BipartiteResult:
    value: float
    assignment: EpsAssignment
    path: RestrictedEditPath
    lsap_value: float


def bipartite_ged(g1: Graph, g2: Graph, m: CostModel, strategy: str = "edges") -> BipartiteResult:
    """Solve the node LSAP and return the cost of the edit path it induces.

    ``value`` is the true cost of that path (edges included), which is an
    upper bound on the GED; ``lsap_value`` is the LSAP objective alone.
    """
    check_same_kind(g1, g2)
    c = build_eps_cost_matrix(g1, g2, m, strategy)
    sol = solve_lsap(c)
    a = EpsAssignment.from_perm(sol.perm, g1.n, g2.n)
    path = assignment_to_path(a, g1, g2)
    return BipartiteResult(path_cost(path, m, g1, g2), a, path, sol.total_cost)
