"""Random instance generators shared by the test modules."""

from __future__ import annotations

import itertools

import numpy as np

from gedqap.costs import ConstantCostModel, LabelCostModel
from gedqap.editpath import EpsAssignment, assignment_to_path, path_cost
from gedqap.graph import Graph

NODE_LABELS = ("A", "B", "C")
EDGE_LABELS = ("x", "y")


def random_graph(rng, n, directed=False, p=0.45, node_labels=NODE_LABELS, edge_labels=EDGE_LABELS):
    labels = [node_labels[i] for i in rng.integers(len(node_labels), size=n)]
    edges = []
    for u in range(n):
        for v in range(n):
            if u == v or (not directed and v < u):
                continue
            if rng.random() < p:
                edges.append((u, v, edge_labels[rng.integers(len(edge_labels))]))
    return Graph.from_edges(labels, edges, directed=directed)


def random_pair(rng, max_n=6, directed=None, min_n=0):
    if directed is None:
        directed = bool(rng.integers(2))
    n1, n2 = rng.integers(min_n, max_n + 1, size=2)
    return random_graph(rng, int(n1), directed), random_graph(rng, int(n2), directed)


def random_constant_model(rng, integer=True):
    vals = rng.integers(0, 5, size=6) if integer else rng.random(6) * 3
    return ConstantCostModel(*[float(v) for v in vals])


def random_label_model(rng):
    """Asymmetric per-label tables with real costs."""
    def r():
        return float(np.round(rng.random() * 3, 3))
    return LabelCostModel(
        node_sub_table={(a, b): r() for a in NODE_LABELS for b in NODE_LABELS if a != b},
        node_del_table={a: r() for a in NODE_LABELS},
        node_ins_table={a: r() for a in NODE_LABELS},
        edge_sub_table={(a, b): r() for a in EDGE_LABELS for b in EDGE_LABELS if a != b},
        edge_del_table={a: r() for a in EDGE_LABELS},
        edge_ins_table={a: r() for a in EDGE_LABELS},
    )


def random_model(rng):
    pick = rng.integers(3)
    if pick == 0:
        return random_constant_model(rng, integer=True)
    if pick == 1:
        return random_constant_model(rng, integer=False)
    return random_label_model(rng)


def random_assignment(rng, n, m):
    perm = rng.permutation(n + m)
    return EpsAssignment.from_perm(perm, n, m)


def all_assignments(n, m):
    """Every injective partial mapping from n nodes into m nodes."""
    for size in range(min(n, m) + 1):
        for src in itertools.combinations(range(n), size):
            for dst in itertools.permutations(range(m), size):
                yield EpsAssignment.from_dict(dict(zip(src, dst)), n, m)


def path_enumeration_ged(g1, g2, model):
    """Minimum path cost over all assignments, built through edit-path objects."""
    return min(path_cost(assignment_to_path(a, g1, g2), model, g1, g2) for a in all_assignments(g1.n, g2.n))


def edge(labels, edges=(), directed=False):
    return Graph.from_edges(labels, edges, directed=directed)
