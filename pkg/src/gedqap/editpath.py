"""Epsilon-assignments, restricted edit paths and their costs.

An epsilon-assignment is stored by its canonical representative: for each
node of the first graph, the node of the second graph it is substituted to,
or ``None`` when it is removed.  Inserted nodes are the second-graph nodes
left out of the image.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .costs import CostModel, PathCounts
from .graph import Graph

__all__ = [
    "EpsAssignment",
    "RestrictedEditPath",
    "assignment_to_path",
    "path_to_assignment",
    "path_cost",
    "path_counts",
    "mapping_cost",
    "validate_path",
    "format_path",
    "parse_path",
    "check_same_kind",
]


def check_same_kind(g1: Graph, g2: Graph) -> None:
    if g1.directed != g2.directed:
        raise ValueError("both graphs must be directed or both undirected")


@dataclass(frozen=True)
class EpsAssignment:
    mapping: tuple[int | None, ...]
    m: int

    def __post_init__(self):
        object.__setattr__(self, "mapping", tuple(self.mapping))
        image = [k for k in self.mapping if k is not None]
        if len(set(image)) != len(image):
            raise ValueError("substitutions must be injective")
        if any(not 0 <= k < self.m for k in image):
            raise ValueError("substitution target out of range")

    @classmethod
    def empty(cls, n: int, m: int) -> "EpsAssignment":
        """Remove every node of the first graph, insert every node of the second."""
        return cls((None,) * n, m)

    @classmethod
    def from_dict(cls, sub: dict[int, int], n: int, m: int) -> "EpsAssignment":
        return cls(tuple(sub.get(i) for i in range(n)), m)

    @classmethod
    def from_perm(cls, perm: Sequence[int], n: int, m: int) -> "EpsAssignment":
        """Read the substitution block of an (n+m)-permutation of epsilon form."""
        return cls(tuple(int(perm[i]) if perm[i] < m else None for i in range(n)), m)

    @classmethod
    def from_matrix(cls, x: np.ndarray, n: int, m: int) -> "EpsAssignment":
        rows = np.argmax(x[:n], axis=1) if n else []
        return cls.from_perm(list(rows), n, m)

    @property
    def n(self) -> int:
        return len(self.mapping)

    @property
    def sub(self) -> dict[int, int]:
        return {i: k for i, k in enumerate(self.mapping) if k is not None}

    @property
    def removed(self) -> frozenset[int]:
        return frozenset(i for i, k in enumerate(self.mapping) if k is None)

    @property
    def inserted(self) -> frozenset[int]:
        image = set(k for k in self.mapping if k is not None)
        return frozenset(k for k in range(self.m) if k not in image)

    def to_perm(self) -> tuple[int, ...]:
        """Full (n+m)-permutation; the dummy-to-dummy block is filled canonically."""
        n, m = self.n, self.m
        perm = [0] * (n + m)
        for i, k in enumerate(self.mapping):
            perm[i] = m + i if k is None else k
        free_dummy_cols = [m + i for i, k in enumerate(self.mapping) if k is not None]
        used = set(k for k in self.mapping if k is not None)
        for k in range(m):
            if k not in used:
                perm[n + k] = k
        for k, col in zip(sorted(used), free_dummy_cols):
            perm[n + k] = col
        return tuple(perm)

    def to_matrix(self) -> np.ndarray:
        size = self.n + self.m
        x = np.zeros((size, size))
        x[np.arange(size), self.to_perm()] = 1.0
        return x


Edge = tuple[int, int]


@dataclass(frozen=True)
class RestrictedEditPath:
    """Edit operations grouped as removals, substitutions, insertions.

    Node ids of removals and substitution sources refer to the first graph,
    ids of insertions and substitution targets to the second.  Undirected
    edges are recorded once, keyed by the ordered pair of the first graph
    with ``src < dst`` (insertions: of the second graph).
    """

    n1: int
    n2: int
    directed: bool
    edge_removals: tuple[Edge, ...] = ()
    node_removals: tuple[int, ...] = ()
    node_subs: tuple[tuple[int, int], ...] = ()
    edge_subs: tuple[tuple[Edge, Edge], ...] = ()
    node_inserts: tuple[int, ...] = ()
    edge_inserts: tuple[Edge, ...] = ()

    def operations(self) -> list[tuple]:
        """The path as one flat (R, S, I) sequence of operations."""
        ops: list[tuple] = []
        ops += [("re", i, j) for i, j in self.edge_removals]
        ops += [("rn", i) for i in self.node_removals]
        ops += [("sn", i, k) for i, k in self.node_subs]
        ops += [("se", i, j, k, l) for (i, j), (k, l) in self.edge_subs]
        ops += [("in", k) for k in self.node_inserts]
        ops += [("ie", k, l) for k, l in self.edge_inserts]
        return ops

    def normalized(self) -> "RestrictedEditPath":
        return RestrictedEditPath(
            self.n1, self.n2, self.directed,
            tuple(sorted(self.edge_removals)), tuple(sorted(self.node_removals)),
            tuple(sorted(self.node_subs)), tuple(sorted(self.edge_subs)),
            tuple(sorted(self.node_inserts)), tuple(sorted(self.edge_inserts)))


def assignment_to_path(a: EpsAssignment, g1: Graph, g2: Graph) -> RestrictedEditPath:
    check_same_kind(g1, g2)
    if a.n != g1.n or a.m != g2.n:
        raise ValueError("assignment does not match the graph sizes")
    phi = a.mapping
    inv = {k: i for i, k in enumerate(phi) if k is not None}
    edge_subs, edge_removals, edge_inserts = [], [], []
    for i, j, _lab in g1.edges():
        k, l = phi[i], phi[j]
        if k is not None and l is not None and (k, l) in g2.arcs:
            edge_subs.append(((i, j), (k, l)))
        else:
            edge_removals.append((i, j))
    for k, l, _lab in g2.edges():
        i, j = inv.get(k), inv.get(l)
        if i is None or j is None or (i, j) not in g1.arcs:
            edge_inserts.append((k, l))
    return RestrictedEditPath(
        g1.n, g2.n, g1.directed,
        edge_removals=tuple(edge_removals),
        node_removals=tuple(sorted(a.removed)),
        node_subs=tuple(sorted(a.sub.items())),
        edge_subs=tuple(edge_subs),
        node_inserts=tuple(sorted(a.inserted)),
        edge_inserts=tuple(edge_inserts),
    )


def path_to_assignment(p: RestrictedEditPath) -> EpsAssignment:
    sub: dict[int, int] = {}
    for i, k in p.node_subs:
        if i in sub:
            raise ValueError(f"node {i} substituted twice")
        sub[i] = k
    if set(sub) & set(p.node_removals):
        raise ValueError("a node is both substituted and removed")
    if set(sub.values()) & set(p.node_inserts):
        raise ValueError("a node is both substituted and inserted")
    if len(set(sub) | set(p.node_removals)) != p.n1:
        raise ValueError("every node of the first graph must be substituted or removed")
    return EpsAssignment.from_dict(sub, p.n1, p.n2)


def path_cost(p: RestrictedEditPath, m: CostModel, g1: Graph, g2: Graph) -> float:
    """Sum of the costs of every operation of ``p``.

    Undirected edge operations are stored once per edge, which is the same
    as summing over both arcs and halving.
    """
    l1, l2 = g1.labels, g2.labels
    total = 0.0
    for i, j in p.edge_removals:
        total += m.edge_del(g1.arcs[(i, j)])
    for i in p.node_removals:
        total += m.node_del(l1[i])
    for i, k in p.node_subs:
        total += m.node_sub(l1[i], l2[k])
    for (i, j), (k, l) in p.edge_subs:
        total += m.edge_sub(g1.arcs[(i, j)], g2.arcs[(k, l)])
    for k in p.node_inserts:
        total += m.node_ins(l2[k])
    for k, l in p.edge_inserts:
        total += m.edge_ins(g2.arcs[(k, l)])
    return total


def path_counts(p: RestrictedEditPath, m: CostModel, g1: Graph, g2: Graph) -> PathCounts:
    v_f = sum(1 for i, k in p.node_subs if m.node_sub(g1.labels[i], g2.labels[k]) != 0)
    e_f = sum(1 for e, f in p.edge_subs if m.edge_sub(g1.arcs[e], g2.arcs[f]) != 0)
    s_v, s_e = len(p.node_subs), len(p.edge_subs)
    return PathCounts(g1.n, s_v, g1.num_edges, s_e, v_f, e_f, g2.n, s_v, g2.num_edges, s_e)


def mapping_cost(mapping: Sequence[int | None], m: CostModel, g1: Graph, g2: Graph) -> float:
    """Cost of the restricted edit path induced by a node mapping, without building it."""
    total = 0.0
    used = set()
    for i, k in enumerate(mapping):
        if k is None:
            total += m.node_del(g1.labels[i])
        else:
            used.add(k)
            total += m.node_sub(g1.labels[i], g2.labels[k])
    for k in range(g2.n):
        if k not in used:
            total += m.node_ins(g2.labels[k])
    inv = {k: i for i, k in enumerate(mapping) if k is not None}
    for i, j, lab in g1.edges():
        k, l = mapping[i], mapping[j]
        lab2 = g2.arcs.get((k, l)) if k is not None and l is not None else None
        total += m.edge_del(lab) if lab2 is None else m.edge_sub(lab, lab2)
    for k, l, lab in g2.edges():
        i, j = inv.get(k), inv.get(l)
        if i is None or j is None or (i, j) not in g1.arcs:
            total += m.edge_ins(lab)
    return total


def _ekey(directed: bool, u: int, v: int) -> Edge:
    return (u, v) if directed or u < v else (v, u)


def validate_path(p: RestrictedEditPath, g1: Graph, g2: Graph) -> list[str]:
    """Replay ``p`` on ``g1`` and report every rule it breaks.

    Checks: operands exist when used, nodes are removed only after their
    incident edges, no edge is duplicated or attached to a missing node,
    nothing is edited twice, no edge is removed and re-inserted between the
    same substituted nodes, and the final graph equals ``g2`` under the node
    correspondence given by the substitutions.
    """
    problems: list[str] = []
    d = g1.directed
    if g1.directed != g2.directed or p.directed != d:
        return ["graphs and path disagree on directedness"]
    if p.n1 != g1.n or p.n2 != g2.n:
        problems.append("path sizes do not match the graphs")
    # current graph: nodes keyed ("a", i) for original nodes, ("b", k) for inserted ones
    nodes = {("a", i): lab for i, lab in enumerate(g1.labels)}
    edges = {}
    for u, v, lab in g1.edges():
        edges[(("a", u), ("a", v))] = lab

    def find(a, b):
        if (a, b) in edges:
            return (a, b)
        if not d and (b, a) in edges:
            return (b, a)
        return None

    removed_edges = set()
    for i, j in p.edge_removals:
        key = find(("a", i), ("a", j))
        if key is None:
            problems.append(f"re {i} {j}: edge does not exist")
            continue
        del edges[key]
        removed_edges.add(_ekey(d, i, j))
    for i in p.node_removals:
        if ("a", i) not in nodes:
            problems.append(f"rn {i}: node does not exist")
            continue
        if any(("a", i) in e for e in edges):
            problems.append(f"rn {i}: incident edges must be removed first")
        del nodes[("a", i)]
    phi: dict[int, int] = {}
    for i, k in p.node_subs:
        if ("a", i) not in nodes:
            problems.append(f"sn {i} {k}: node does not exist (removed or substituted and removed)")
            continue
        if i in phi:
            problems.append(f"sn {i} {k}: node substituted twice")
            continue
        if k in phi.values():
            problems.append(f"sn {i} {k}: target already used")
        if not 0 <= k < g2.n:
            problems.append(f"sn {i} {k}: target out of range")
            continue
        phi[i] = k
        nodes[("a", i)] = g2.labels[k]
    subbed_edges = set()
    for (i, j), (k, l) in p.edge_subs:
        key = find(("a", i), ("a", j))
        if key is None:
            problems.append(f"se {i} {j}: edge does not exist")
            continue
        if _ekey(d, i, j) in subbed_edges:
            problems.append(f"se {i} {j}: edge substituted twice")
            continue
        if (phi.get(i), phi.get(j)) != (k, l) and (d or (phi.get(j), phi.get(i)) != (k, l)):
            problems.append(f"se {i} {j} {k} {l}: target edge disagrees with node substitutions")
        lab = g2.arcs.get((k, l))
        if lab is None:
            problems.append(f"se {i} {j} {k} {l}: target edge not in second graph")
            continue
        subbed_edges.add(_ekey(d, i, j))
        edges[key] = lab
    for k in p.node_inserts:
        if k in phi.values():
            problems.append(f"in {k}: node is both substituted and inserted")
        if ("b", k) in nodes:
            problems.append(f"in {k}: node inserted twice")
        if not 0 <= k < g2.n:
            problems.append(f"in {k}: out of range")
            continue
        nodes[("b", k)] = g2.labels[k]
    # second-graph id -> current node key
    where = {k: ("a", i) for i, k in phi.items()}
    where.update({k: ("b", k) for k in p.node_inserts if 0 <= k < g2.n})
    inv = {k: i for i, k in phi.items()}
    for k, l in p.edge_inserts:
        a, b = where.get(k), where.get(l)
        if a is None or b is None or a not in nodes or b not in nodes:
            problems.append(f"ie {k} {l}: endpoint does not exist yet")
            continue
        if a == b:
            problems.append(f"ie {k} {l}: self-loop")
            continue
        if find(a, b) is not None:
            problems.append(f"ie {k} {l}: edge already exists")
            continue
        if (k, l) not in g2.arcs:
            problems.append(f"ie {k} {l}: edge not in second graph")
            continue
        if k in inv and l in inv and _ekey(d, inv[k], inv[l]) in removed_edges:
            problems.append(f"ie {k} {l}: edge removed and then inserted")
        edges[(a, b)] = g2.arcs[(k, l)]
    # compare the final graph with g2
    leftover = [key for key in nodes if key[0] == "a" and key[1] not in phi]
    if leftover:
        problems.append(f"nodes {sorted(x[1] for x in leftover)} are kept but never substituted")
    untouched = sorted(_ekey(d, u, v) for u, v, _lab in g1.edges()
                       if _ekey(d, u, v) not in removed_edges | subbed_edges)
    if untouched:
        problems.append(f"edges {untouched} are kept but never substituted")
    final_nodes = {}
    for key, lab in nodes.items():
        k = phi.get(key[1]) if key[0] == "a" else key[1]
        if k is not None:
            final_nodes[k] = lab
    if final_nodes != dict(enumerate(g2.labels)):
        problems.append("final node set or labels differ from the second graph")
    back = {v: k for k, v in where.items()}
    final_edges = {}
    for (a, b), lab in edges.items():
        ka, kb = back.get(a), back.get(b)
        if ka is None or kb is None:
            continue
        final_edges[(ka, kb)] = lab
        if not d:
            final_edges[(kb, ka)] = lab
    if final_edges != dict(g2.arcs):
        problems.append("final edge set or labels differ from the second graph")
    return problems


def format_path(p: RestrictedEditPath) -> str:
    lines = []
    for op in p.operations():
        lines.append(" ".join(str(x) for x in op))
    return "\n".join(lines) + ("\n" if lines else "")


def parse_path(text: str, n1: int, n2: int, directed: bool) -> RestrictedEditPath:
    """Parse one-operation-per-line text in any order; the result is grouped as (R, S, I)."""
    groups: dict[str, list] = {t: [] for t in ("re", "rn", "sn", "se", "in", "ie")}
    arity = {"re": 2, "rn": 1, "sn": 2, "se": 4, "in": 1, "ie": 2}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tag, *args = line.split()
        if tag not in arity or len(args) != arity[tag]:
            raise ValueError(f"line {lineno}: malformed operation {line!r}")
        vals = [int(a) for a in args]
        if tag in ("re", "sn", "ie"):
            groups[tag].append(tuple(vals))
        elif tag == "se":
            groups[tag].append((tuple(vals[:2]), tuple(vals[2:])))
        else:
            groups[tag].append(vals[0])
    return RestrictedEditPath(
        n1, n2, directed,
        edge_removals=tuple(groups["re"]), node_removals=tuple(groups["rn"]),
        node_subs=tuple(groups["sn"]), edge_subs=tuple(groups["se"]),
        node_inserts=tuple(groups["in"]), edge_inserts=tuple(groups["ie"]),
    )
