"""Elementary edit costs.

A cost model answers six questions: what it costs to substitute, delete or
insert a node or an edge carrying a given label.  Substituting a label by
itself is always free.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, NamedTuple

__all__ = [
    "CostModel",
    "ConstantCostModel",
    "LabelCostModel",
    "ClampedCostModel",
    "PathCounts",
    "clamp_substitutions",
    "check_model",
    "path_cost_constant",
    "similarity_constant",
]


class CostModel:
    """Base class; subclasses override the six cost functions."""

    def node_sub(self, a: str, b: str) -> float:
        raise NotImplementedError

    def node_del(self, a: str) -> float:
        raise NotImplementedError

    def node_ins(self, a: str) -> float:
        raise NotImplementedError

    def edge_sub(self, a: str, b: str) -> float:
        raise NotImplementedError

    def edge_del(self, a: str) -> float:
        raise NotImplementedError

    def edge_ins(self, a: str) -> float:
        raise NotImplementedError


@dataclass(frozen=True)
class ConstantCostModel(CostModel):
    """Label-sensitive constant costs: substitution is free iff labels agree."""

    cvs: float = 1.0
    cvd: float = 1.0
    cvi: float = 1.0
    ces: float = 1.0
    ced: float = 1.0
    cei: float = 1.0

    def __post_init__(self):
        for name in ("cvs", "cvd", "cvi", "ces", "ced", "cei"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")

    def node_sub(self, a, b):
        return 0.0 if a == b else self.cvs

    def node_del(self, a):
        return self.cvd

    def node_ins(self, a):
        return self.cvi

    def edge_sub(self, a, b):
        return 0.0 if a == b else self.ces

    def edge_del(self, a):
        return self.ced

    def edge_ins(self, a):
        return self.cei


@dataclass(frozen=True)
class LabelCostModel(CostModel):
    """Per-label costs looked up in tables, falling back to constants.

    Substitution tables are keyed by ``(old, new)`` label pairs and need not
    be symmetric.
    """

    node_sub_table: dict = field(default_factory=dict)
    node_del_table: dict = field(default_factory=dict)
    node_ins_table: dict = field(default_factory=dict)
    edge_sub_table: dict = field(default_factory=dict)
    edge_del_table: dict = field(default_factory=dict)
    edge_ins_table: dict = field(default_factory=dict)
    default: ConstantCostModel = field(default_factory=ConstantCostModel)

    def node_sub(self, a, b):
        return 0.0 if a == b else self.node_sub_table.get((a, b), self.default.cvs)

    def node_del(self, a):
        return self.node_del_table.get(a, self.default.cvd)

    def node_ins(self, a):
        return self.node_ins_table.get(a, self.default.cvi)

    def edge_sub(self, a, b):
        return 0.0 if a == b else self.edge_sub_table.get((a, b), self.default.ces)

    def edge_del(self, a):
        return self.edge_del_table.get(a, self.default.ced)

    def edge_ins(self, a):
        return self.edge_ins_table.get(a, self.default.cei)


@dataclass(frozen=True)
class ClampedCostModel(CostModel):
    base: CostModel

    def node_sub(self, a, b):
        return min(self.base.node_sub(a, b), self.base.node_del(a) + self.base.node_ins(b))

    def node_del(self, a):
        return self.base.node_del(a)

    def node_ins(self, a):
        return self.base.node_ins(a)

    def edge_sub(self, a, b):
        return min(self.base.edge_sub(a, b), self.base.edge_del(a) + self.base.edge_ins(b))

    def edge_del(self, a):
        return self.base.edge_del(a)

    def edge_ins(self, a):
        return self.base.edge_ins(a)


def clamp_substitutions(m: CostModel) -> CostModel:
    """Cap every substitution at the price of a deletion followed by an insertion.

    With clamped costs the cheapest restricted edit path is also the cheapest
    edit path overall.
    """
    if isinstance(m, ConstantCostModel):
        return ConstantCostModel(min(m.cvs, m.cvd + m.cvi), m.cvd, m.cvi,
                                 min(m.ces, m.ced + m.cei), m.ced, m.cei)
    if isinstance(m, ClampedCostModel):
        return m
    return ClampedCostModel(m)


def check_model(m: CostModel, node_labels: Iterable[str], edge_labels: Iterable[str]) -> list[str]:
    """Check non-negativity and free identity substitutions over given alphabets."""
    problems = []
    node_labels, edge_labels = list(node_labels), list(edge_labels)
    for a in node_labels:
        if m.node_sub(a, a) != 0:
            problems.append(f"node_sub({a}, {a}) != 0")
        for name, val in (("node_del", m.node_del(a)), ("node_ins", m.node_ins(a))):
            if val < 0:
                problems.append(f"{name}({a}) < 0")
        for b in node_labels:
            if m.node_sub(a, b) < 0:
                problems.append(f"node_sub({a}, {b}) < 0")
    for a in edge_labels:
        if m.edge_sub(a, a) != 0:
            problems.append(f"edge_sub({a}, {a}) != 0")
        for name, val in (("edge_del", m.edge_del(a)), ("edge_ins", m.edge_ins(a))):
            if val < 0:
                problems.append(f"{name}({a}) < 0")
        for b in edge_labels:
            if m.edge_sub(a, b) < 0:
                problems.append(f"edge_sub({a}, {b}) < 0")
    return problems


class PathCounts(NamedTuple):
    """Cardinals describing an edit path; undirected edges are counted once."""

    v1: int
    v1_hat: int
    e1: int
    e1_hat: int
    v_f: int
    e_f: int
    v2: int
    v2_hat: int
    e2: int
    e2_hat: int


def path_cost_constant(counts: PathCounts, m: ConstantCostModel) -> float:
    c = counts
    if not (0 <= c.v1_hat <= c.v1 and 0 <= c.e1_hat <= c.e1 and 0 <= c.v_f <= c.v1_hat
            and 0 <= c.e_f <= c.e1_hat and 0 <= c.v2_hat <= c.v2 and 0 <= c.e2_hat <= c.e2
            and c.v1_hat == c.v2_hat and c.e1_hat == c.e2_hat):
        raise ValueError(f"inconsistent path cardinals: {counts}")
    return ((c.v1 - c.v1_hat) * m.cvd + (c.e1 - c.e1_hat) * m.ced
            + c.v_f * m.cvs + c.e_f * m.ces
            + (c.v2 - c.v2_hat) * m.cvi + (c.e2 - c.e2_hat) * m.cei)


def similarity_constant(counts: PathCounts, m: ConstantCostModel) -> float:
    """The quantity whose maximization is equivalent to minimizing the path cost."""
    c = counts
    return (c.v1_hat * (m.cvd + m.cvi) + c.e1_hat * (m.ced + m.cei)
            - c.v_f * m.cvs - c.e_f * m.ces)
