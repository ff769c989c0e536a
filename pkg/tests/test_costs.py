import numpy as np
import pytest

from gedqap.costs import (ClampedCostModel, ConstantCostModel, LabelCostModel, PathCounts, check_model,
                          clamp_substitutions, path_cost_constant, similarity_constant)
from gedqap.editpath import assignment_to_path, path_cost, path_counts
from helpers import (EDGE_LABELS, NODE_LABELS, all_assignments, random_assignment,
                     random_constant_model, random_label_model, random_pair)


def test_clamp_caps_substitution():
    m = LabelCostModel(node_sub_table={("A", "B"): 5.0},
                       node_del_table={"A": 1.0}, node_ins_table={"B": 1.0})
    c = clamp_substitutions(m)
    assert c.node_sub("A", "B") == 2.0
    assert c.node_sub("A", "A") == 0.0
    assert c.node_del("A") == 1.0 and c.node_ins("B") == 1.0


def test_clamp_edge_substitution():
    m = ConstantCostModel(ces=7, ced=2, cei=3)
    assert clamp_substitutions(m).edge_sub("x", "y") == 5
    assert clamp_substitutions(m).edge_sub("x", "x") == 0


def test_clamp_leaves_unit_costs_unchanged():
    m = ConstantCostModel()
    assert clamp_substitutions(m) == m


def test_clamp_is_idempotent():
    m = ClampedCostModel(random_label_model(np.random.default_rng(0)))
    assert clamp_substitutions(m) is m


def test_negative_constant_rejected():
    with pytest.raises(ValueError):
        ConstantCostModel(cvd=-1)


def test_check_model():
    assert check_model(ConstantCostModel(), NODE_LABELS, EDGE_LABELS) == []
    bad = LabelCostModel(node_del_table={"A": -1.0})
    assert check_model(bad, NODE_LABELS, EDGE_LABELS) == ["node_del(A) < 0"]


def test_identity_counts_cost_nothing():
    c = PathCounts(3, 3, 2, 2, 0, 0, 3, 3, 2, 2)
    assert path_cost_constant(c, ConstantCostModel(2, 3, 4, 5, 6, 7)) == 0


def test_hand_counted_path():
    c = PathCounts(v1=2, v1_hat=1, e1=0, e1_hat=0, v_f=1, e_f=0, v2=1, v2_hat=1, e2=0, e2_hat=0)
    assert path_cost_constant(c, ConstantCostModel()) == 2


@pytest.mark.parametrize("counts", [
    PathCounts(2, 3, 0, 0, 0, 0, 3, 3, 0, 0),
    PathCounts(2, 2, 0, 0, 3, 0, 2, 2, 0, 0),
    PathCounts(2, 1, 0, 0, 0, 0, 2, 2, 0, 0),
    PathCounts(2, 1, 1, 2, 0, 0, 2, 1, 2, 2),
])
def test_inconsistent_counts_rejected(counts):
    with pytest.raises(ValueError):
        path_cost_constant(counts, ConstantCostModel())


def test_constant_formula_matches_path_cost():
    rng = np.random.default_rng(11)
    for _ in range(400):
        g1, g2 = random_pair(rng)
        m = random_constant_model(rng, integer=bool(rng.integers(2)))
        p = assignment_to_path(random_assignment(rng, g1.n, g2.n), g1, g2)
        assert path_cost_constant(path_counts(p, m, g1, g2), m) == pytest.approx(path_cost(p, m, g1, g2), abs=1e-12)


def test_min_cost_and_max_similarity_pick_the_same_paths():
    rng = np.random.default_rng(5)
    for _ in range(40):
        g1, g2 = random_pair(rng, max_n=4)
        m = random_constant_model(rng, integer=True)
        costs, sims = [], []
        for a in all_assignments(g1.n, g2.n):
            p = assignment_to_path(a, g1, g2)
            counts = path_counts(p, m, g1, g2)
            costs.append(path_cost(p, m, g1, g2))
            sims.append(similarity_constant(counts, m))
        costs, sims = np.array(costs), np.array(sims)
        assert set(np.flatnonzero(costs == costs.min())) == set(np.flatnonzero(sims == sims.max()))


def _independent_optimum(g1, g2, m):
    """Best path when every edge substitution may instead be a removal plus an insertion."""
    best = np.inf
    for a in all_assignments(g1.n, g2.n):
        p = assignment_to_path(a, g1, g2)
        total = path_cost(p, m, g1, g2)
        for e, f in p.edge_subs:
            lab1, lab2 = g1.arcs[e], g2.arcs[f]
            total += min(0.0, m.edge_del(lab1) + m.edge_ins(lab2) - m.edge_sub(lab1, lab2))
        best = min(best, total)
    return best


def _restricted_optimum(g1, g2, m):
    return min(path_cost(assignment_to_path(a, g1, g2), m, g1, g2) for a in all_assignments(g1.n, g2.n))


def test_clamped_restricted_optimum_equals_independent_optimum():
    rng = np.random.default_rng(8)
    for trial in range(40):
        g1, g2 = random_pair(rng, max_n=4)
        m = random_label_model(rng) if trial % 2 else ConstantCostModel(cvs=5, ces=6, ced=1, cei=2)
        clamped = clamp_substitutions(m)
        restricted = _restricted_optimum(g1, g2, clamped)
        assert restricted == pytest.approx(_independent_optimum(g1, g2, clamped), abs=1e-9)
        # clamping only ever lowers the optimum
        assert restricted <= _independent_optimum(g1, g2, m) + 1e-9
