"""Simple labeled graphs and the line-oriented GEDG text format.

A graph is stored as a tuple of node labels (node ids are the dense
positions ``0..n-1``) plus a mapping of ordered arcs ``(src, dst) -> label``.
Undirected graphs keep both arcs of every edge, with the same label, so
edge formulas can always index ordered pairs.

GEDG format::

    graph undirected
    # comment
    v 0 C
    v 1 O
    e 0 1 s
"""

from __future__ import annotations

from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping

import numpy as np

__all__ = [
    "Graph",
    "GraphError",
    "GraphFormatError",
    "parse_graph",
    "parse_graph_with_ids",
    "serialize_graph",
    "validate",
    "read_graph",
    "write_graph",
]


class GraphError(ValueError):
    """Raised when a graph violates the simple-graph invariants."""


class GraphFormatError(GraphError):
    """Syntax or consistency error in GEDG text; carries the line number."""

    def __init__(self, lineno: int, message: str):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {message}")


@dataclass(frozen=True, eq=False)
class Graph:
    directed: bool
    labels: tuple[str, ...]
    arcs: Mapping[tuple[int, int], str] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "arcs", MappingProxyType(dict(self.arcs)))

    @classmethod
    def from_edges(cls, labels: Iterable[str], edges: Iterable[tuple[int, int, str]] = (),
                   directed: bool = False) -> "Graph":
        """Build and validate a graph.

        For undirected graphs each ``(u, v, label)`` creates both arcs.
        """
        arcs: dict[tuple[int, int], str] = {}
        for u, v, lab in edges:
            if (u, v) in arcs:
                raise GraphError(f"duplicate edge ({u}, {v})")
            arcs[(u, v)] = lab
            if not directed:
                arcs[(v, u)] = lab
        g = cls(directed, tuple(labels), arcs)
        problems = validate(g)
        if problems:
            raise GraphError("; ".join(problems))
        return g

    @property
    def n(self) -> int:
        return len(self.labels)

    def __len__(self) -> int:
        return len(self.labels)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (self.directed == other.directed and self.labels == other.labels
                and dict(self.arcs) == dict(other.arcs))

    def __reduce__(self):
        return (Graph, (self.directed, self.labels, dict(self.arcs)))

    def __hash__(self) -> int:
        return hash((self.directed, self.labels, frozenset(self.arcs.items())))

    def __repr__(self) -> str:
        kind = "directed" if self.directed else "undirected"
        return f"Graph({kind}, n={self.n}, edges={self.num_edges})"

    def edges(self) -> Iterator[tuple[int, int, str]]:
        """Arcs of a directed graph, or each undirected edge once with src < dst."""
        for (u, v), lab in sorted(self.arcs.items()):
            if self.directed or u < v:
                yield u, v, lab

    @property
    def num_edges(self) -> int:
        return len(self.arcs) if self.directed else len(self.arcs) // 2

    def has_arc(self, u: int, v: int) -> bool:
        return (u, v) in self.arcs

    def edge_label(self, u: int, v: int) -> str | None:
        return self.arcs.get((u, v))

    def degree(self, u: int) -> int:
        """Number of incident arcs (in + out for directed graphs)."""
        return sum(1 for (a, b) in self.arcs if a == u or b == u) if self.directed \
            else sum(1 for (a, _b) in self.arcs if a == u)

    def out_arcs(self, u: int) -> list[tuple[int, str]]:
        return sorted((b, lab) for (a, b), lab in self.arcs.items() if a == u)

    def in_arcs(self, u: int) -> list[tuple[int, str]]:
        return sorted((a, lab) for (a, b), lab in self.arcs.items() if b == u)

    def adjacency(self, size: int | None = None) -> np.ndarray:
        """0/1 arc matrix, zero-padded to ``size`` rows and columns."""
        size = self.n if size is None else size
        a = np.zeros((size, size))
        for (u, v) in self.arcs:
            a[u, v] = 1.0
        return a

    def relabel_nodes(self, perm: Iterable[int]) -> "Graph":
        """Return the graph with node ``i`` moved to position ``perm[i]``."""
        perm = list(perm)
        if sorted(perm) != list(range(self.n)):
            raise GraphError("relabeling must be a permutation of the node ids")
        labels = [""] * self.n
        for i, p in enumerate(perm):
            labels[p] = self.labels[i]
        arcs = {(perm[u], perm[v]): lab for (u, v), lab in self.arcs.items()}
        return Graph(self.directed, tuple(labels), arcs)


def validate(g: Graph) -> list[str]:
    """List every invariant violation of ``g``; empty when the graph is valid."""
    problems = []
    n = len(g.labels)
    for i, lab in enumerate(g.labels):
        if not isinstance(lab, str) or not lab or any(c.isspace() for c in lab):
            problems.append(f"node {i}: invalid label {lab!r}")
    for (u, v), lab in g.arcs.items():
        if not (0 <= u < n and 0 <= v < n):
            problems.append(f"arc ({u}, {v}): unknown node")
            continue
        if u == v:
            problems.append(f"arc ({u}, {v}): self-loop")
        if not isinstance(lab, str) or not lab or any(c.isspace() for c in lab):
            problems.append(f"arc ({u}, {v}): invalid label {lab!r}")
        if not g.directed:
            back = g.arcs.get((v, u))
            if back is None:
                problems.append(f"arc ({u}, {v}): symmetry, reverse arc missing")
            elif back != lab:
                problems.append(f"arc ({u}, {v}): symmetry, reverse label {back!r} != {lab!r}")
    return problems


def parse_graph_with_ids(text: str) -> tuple[Graph, list[int]]:
    """Parse GEDG text, returning the graph and the original id of each dense node."""
    directed = None
    ids: dict[int, int] = {}
    labels: list[str] = []
    arcs: dict[tuple[int, int], str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if directed is None:
            if len(parts) != 2 or parts[0] != "graph" or parts[1] not in ("directed", "undirected"):
                raise GraphFormatError(lineno, "expected 'graph directed' or 'graph undirected'")
            directed = parts[1] == "directed"
            continue
        tag = parts[0]
        try:
            if tag == "v":
                if len(parts) != 3:
                    raise GraphFormatError(lineno, "node line must be 'v <id> <label>'")
                nid = int(parts[1])
                if nid in ids:
                    raise GraphFormatError(lineno, f"duplicate node id {nid}")
                ids[nid] = len(labels)
                labels.append(parts[2])
            elif tag == "e":
                if len(parts) != 4:
                    raise GraphFormatError(lineno, "edge line must be 'e <src> <dst> <label>'")
                s, d = int(parts[1]), int(parts[2])
                for end in (s, d):
                    if end not in ids:
                        raise GraphFormatError(lineno, f"edge references unknown node {end}")
                u, v = ids[s], ids[d]
                if u == v:
                    raise GraphFormatError(lineno, f"self-loop on node {s}")
                lab = parts[3]
                if (u, v) in arcs:
                    if not directed and arcs[(u, v)] != lab:
                        raise GraphFormatError(lineno, f"undirected label conflict on edge {s}-{d}")
                    raise GraphFormatError(lineno, f"duplicate edge {s} {d}")
                arcs[(u, v)] = lab
                if not directed:
                    arcs[(v, u)] = lab
            else:
                raise GraphFormatError(lineno, f"unknown line tag {tag!r}")
        except ValueError as exc:
            if isinstance(exc, GraphFormatError):
                raise
            raise GraphFormatError(lineno, f"bad integer: {exc}") from None
    if directed is None:
        raise GraphFormatError(0, "missing 'graph' header")
    original = [0] * len(labels)
    for nid, dense in ids.items():
        original[dense] = nid
    return Graph(directed, tuple(labels), arcs), original


def parse_graph(text: str) -> Graph:
    return parse_graph_with_ids(text)[0]


def serialize_graph(g: Graph) -> str:
    lines = ["graph directed" if g.directed else "graph undirected"]
    lines += [f"v {i} {lab}" for i, lab in enumerate(g.labels)]
    lines += [f"e {u} {v} {lab}" for u, v, lab in g.edges()]
    return "\n".join(lines) + "\n"


def read_graph(path) -> Graph:
    with open(path, encoding="utf-8") as fh:
        return parse_graph(fh.read())


def write_graph(g: Graph, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize_graph(g))
