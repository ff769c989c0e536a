import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from gedqap.bipartite import bipartite_ged
from gedqap.costs import ConstantCostModel, clamp_substitutions
from gedqap.editpath import EpsAssignment, assignment_to_path, path_cost, validate_path
from gedqap.exact import brute_force_ged
from gedqap.qap import (QapInstance, delta_cost, ipfp_min, linearize, objective, qap_ged, quad_cost,
                        random_eps_assignment)
from helpers import edge, random_assignment, random_graph, random_model, random_pair

UNIT = ConstantCostModel()


def dense_delta(g1, g2, m):
    """Independent construction of the full (n+m)^2 x (n+m)^2 quadratic matrix."""
    n, mm = g1.n, g2.n
    size = n + mm

    def node1(i):
        return i if i < n else None

    def node2(k):
        return k if k < mm else None

    def allowed(i, k):
        if i < n:
            return k < mm or k == mm + i
        return k >= mm or k == i - n

    d = np.zeros((size * size, size * size))
    for i, k, j, l in itertools.product(range(size), repeat=4):
        if not (allowed(i, k) and allowed(j, l)):
            continue
        a, b = node1(i), node1(j)
        c, e = node2(k), node2(l)
        lab1 = g1.arcs.get((a, b)) if a is not None and b is not None else None
        lab2 = g2.arcs.get((c, e)) if c is not None and e is not None else None
        if lab1 and lab2:
            v = m.edge_sub(lab1, lab2)
        elif lab1:
            v = m.edge_del(lab1)
        elif lab2:
            v = m.edge_ins(lab2)
        else:
            v = 0.0
        d[i * size + k, j * size + l] = v
    return d + d.T if g1.directed else d


def test_both_edges_absent_costs_nothing():
    g1 = edge("AB")
    g2 = edge("AB")
    inst = QapInstance.from_graphs(g1, g2, UNIT)
    assert quad_cost(inst, 0, 0, 1, 1) == 0


def test_removing_both_endpoints_charges_the_edge():
    g1 = edge("AB", [(0, 1, "x")])
    g2 = edge("C")
    inst = QapInstance.from_graphs(g1, g2, ConstantCostModel(ced=2.5))
    # columns 1 and 2 are the removal dummies of nodes 0 and 1
    assert quad_cost(inst, 0, 1, 1, 2) == 2.5


def test_wrong_removal_dummy_is_forbidden():
    inst = QapInstance.from_graphs(edge("AB"), edge("C"), UNIT)
    assert quad_cost(inst, 0, 2, 1, 1) is None
    assert inst.forbidden[0, 2] and not inst.forbidden[0, 1]
    with pytest.raises(IndexError):
        quad_cost(inst, 0, 0, 0, 9)


def test_forbidden_pattern_matches_allowed_mappings():
    rng = np.random.default_rng(0)
    g1, g2 = random_pair(rng, max_n=4, min_n=1)
    inst = QapInstance.from_graphs(g1, g2, UNIT)
    for i, k, j, l in itertools.product(range(inst.size), repeat=4):
        forbidden = inst.forbidden[i, k] or inst.forbidden[j, l]
        assert (quad_cost(inst, i, k, j, l) is None) == forbidden


def test_symmetry_and_zero_diagonal():
    rng = np.random.default_rng(1)
    for _ in range(10):
        g1, g2 = random_pair(rng, max_n=4)
        inst = QapInstance.from_graphs(g1, g2, random_model(rng))
        for i, k in itertools.product(range(inst.size), repeat=2):
            if inst.allowed(i, k):
                assert quad_cost(inst, i, k, i, k) == 0
            for j, l in itertools.product(range(inst.size), repeat=2):
                assert delta_cost(inst, i, k, j, l) == delta_cost(inst, j, l, i, k)


def test_identity_objective_is_zero():
    g = random_graph(np.random.default_rng(2), 5)
    inst = QapInstance.from_graphs(g, g, UNIT)
    assert objective(inst, EpsAssignment(tuple(range(5)), 5)) == 0


def test_removing_an_edge_and_its_nodes():
    g1 = edge("AB", [(0, 1, "x")])
    inst = QapInstance.from_graphs(g1, edge(""), UNIT)
    assert objective(inst, EpsAssignment.empty(2, 0)) == 3


def test_objective_rejects_forbidden_support():
    inst = QapInstance.from_graphs(edge("AB"), edge("C"), UNIT)
    x = np.zeros((3, 3))
    x[0, 2] = x[1, 1] = x[2, 0] = 1
    with pytest.raises(ValueError):
        objective(inst, x)
    with pytest.raises(ValueError):
        objective(inst, np.zeros((2, 2)))


@given(st.integers(0, 2**32 - 1))
def test_objective_equals_path_cost(seed):
    rng = np.random.default_rng(seed)
    g1, g2 = random_pair(rng)
    m = random_model(rng)
    a = random_assignment(rng, g1.n, g2.n)
    inst = QapInstance.from_graphs(g1, g2, m)
    assert objective(inst, a) == pytest.approx(path_cost(assignment_to_path(a, g1, g2), m, g1, g2), abs=1e-9)


def test_linearize_at_zero_is_the_linear_cost():
    rng = np.random.default_rng(3)
    g1, g2 = random_pair(rng, min_n=1)
    inst = QapInstance.from_graphs(g1, g2, UNIT)
    size = inst.size
    grad = linearize(inst, np.zeros((size, size)))
    allowed = ~inst.forbidden
    assert np.array_equal(grad.cost[allowed], inst.c[allowed])


def test_linearize_on_two_node_example():
    g1 = edge("AB", [(0, 1, "x")])
    g2 = edge("AC", [(0, 1, "x")])
    inst = QapInstance.from_graphs(g1, g2, UNIT)
    grad = linearize(inst, EpsAssignment((0, 1), 2)).cost
    # keeping 0 -> 0 next to 1 -> 1 substitutes the edge for free
    assert grad[0, 0] == 0
    # sending 0 to its removal dummy removes the edge it shares with 1
    assert grad[0, 2] == 1 + 1
    assert grad[1, 1] == 1


@given(st.integers(0, 2**32 - 1))
def test_linearize_matches_dense_oracle(seed):
    rng = np.random.default_rng(seed)
    g1, g2 = random_pair(rng, max_n=4)
    if g1.n + g2.n == 0 or g1.n + g2.n > 8:
        return
    m = random_model(rng)
    inst = QapInstance.from_graphs(g1, g2, m)
    size = inst.size
    d = dense_delta(g1, g2, m)
    # a random point of the polytope: convex combination of assignments
    weights = rng.dirichlet(np.ones(3))
    x = sum(w * random_assignment(rng, g1.n, g2.n).to_matrix() for w in weights)
    want = (x.reshape(-1) @ d).reshape(size, size) + inst.c
    got = linearize(inst, x).cost
    allowed = ~inst.forbidden
    assert np.allclose(got[allowed], want[allowed], atol=1e-9)
    xv = x.reshape(-1)
    assert objective(inst, x) == pytest.approx(0.5 * xv @ d @ xv + np.sum(inst.c * x), abs=1e-9)


def test_single_node_fixed_point():
    inst = QapInstance.from_graphs(edge("A"), edge("A"), UNIT)
    res = ipfp_min(inst, EpsAssignment((0,), 1))
    assert res.iterations == 1 and res.value == 0
    assert res.trace == (0.0, 0.0)


def test_ipfp_from_empty_assignment_finds_the_relabel():
    g1 = edge("AB", [(0, 1, "x")])
    g2 = edge("AC", [(0, 1, "x")])
    inst = QapInstance.from_graphs(g1, g2, UNIT)
    res = ipfp_min(inst, EpsAssignment.empty(2, 2))
    assert res.value == 1 and res.best_binary_value == 1


def test_ipfp_rejects_bad_inputs():
    inst = QapInstance.from_graphs(edge("A"), edge("A"), UNIT)
    with pytest.raises(ValueError):
        ipfp_min(inst, EpsAssignment((0,), 1), k_max=0)
    with pytest.raises(ValueError):
        ipfp_min(inst, np.full((2, 2), 0.3))


def test_ipfp_from_continuous_start():
    rng = np.random.default_rng(12)
    for _ in range(30):
        g1, g2 = random_pair(rng, min_n=1)
        inst = QapInstance.from_graphs(g1, g2, random_model(rng))
        size = inst.size
        x0 = np.zeros((size, size))
        x0[~inst.forbidden] = 1.0
        for _ in range(50):  # Sinkhorn scaling onto the polytope
            x0 /= x0.sum(axis=1, keepdims=True)
            x0 /= x0.sum(axis=0, keepdims=True)
        res = ipfp_min(inst, x0, tol=1e-6)
        assert all(b <= a + 1e-9 for a, b in zip(res.trace, res.trace[1:]))
        assert res.value == pytest.approx(objective(inst, res.assignment))


def test_traces_descend_and_projection_is_legal():
    rng = np.random.default_rng(13)
    for _ in range(100):
        g1, g2 = random_pair(rng)
        m = random_model(rng)
        inst = QapInstance.from_graphs(g1, g2, m)
        res = ipfp_min(inst, random_eps_assignment(g1.n, g2.n, rng))
        assert all(b <= a + 1e-12 for a, b in zip(res.trace, res.trace[1:]))
        x = res.assignment.to_matrix()
        assert not x[inst.forbidden].any()
        assert res.best_binary_value <= res.trace[0] + 1e-12
        assert res.best_binary_value == pytest.approx(objective(inst, res.best_binary))


def test_identical_graphs_give_zero():
    g = random_graph(np.random.default_rng(14), 7)
    for init in ("bnode", "bedges"):
        assert qap_ged(g, g, UNIT, init=init).value == 0


def test_bounds_against_exact_and_bipartite():
    rng = np.random.default_rng(15)
    for _ in range(300):
        g1, g2 = random_pair(rng)
        m = clamp_substitutions(random_model(rng))
        res = qap_ged(g1, g2, m, init="bedges")
        assert res.value <= bipartite_ged(g1, g2, m, "edges").value + 1e-9
        assert res.value >= brute_force_ged(g1, g2, m) - 1e-9
        assert res.value == path_cost(res.path, m, g1, g2)
        assert validate_path(res.path, g1, g2) == []


def test_restarts_never_hurt_and_are_seeded():
    rng = np.random.default_rng(16)
    for _ in range(20):
        g1, g2 = random_pair(rng, min_n=3)
        one = qap_ged(g1, g2, UNIT, init="bedges")
        many = qap_ged(g1, g2, UNIT, init="bedges", restarts=5, seed=3)
        assert many.value <= one.value
        assert len(many.stats["traces"]) == 5
        assert qap_ged(g1, g2, UNIT, init="random", restarts=3, seed=4) == \
            qap_ged(g1, g2, UNIT, init="random", restarts=3, seed=4)


def test_qap_ged_argument_checks():
    g = edge("A")
    with pytest.raises(ValueError):
        qap_ged(g, g, UNIT, init="walks")
    with pytest.raises(ValueError):
        qap_ged(g, g, UNIT, restarts=0)
