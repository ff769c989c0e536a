import numpy as np
import pytest

from gedqap.bipartite import bipartite_ged
from gedqap.costs import ConstantCostModel, clamp_substitutions
from gedqap.editpath import path_cost, validate_path
from gedqap.exact import astar_ged, brute_force_ged
from gedqap.graph import Graph
from helpers import edge, path_enumeration_ged, random_graph, random_model, random_pair

UNIT = ConstantCostModel()


def test_empty_graphs():
    assert brute_force_ged(edge(""), edge(""), UNIT) == 0
    res = astar_ged(edge(""), edge(""), UNIT)
    assert res.value == 0 and res.optimal


def test_single_nodes_prefer_substitution():
    assert brute_force_ged(edge("A"), edge("B"), UNIT) == 1
    assert brute_force_ged(edge("A"), edge("B"), ConstantCostModel(cvs=5)) == 2


def test_removing_an_edge():
    assert brute_force_ged(edge("AB", [(0, 1, "x")]), edge("AB"), UNIT) == 1


def test_identical_graphs():
    g = random_graph(np.random.default_rng(0), 7)
    res = astar_ged(g, g, UNIT)
    assert res.value == 0 and res.optimal


def test_leaf_relabel():
    res = astar_ged(edge("AB", [(0, 1, "x")]), edge("AC", [(0, 1, "x")]), UNIT)
    assert res.value == 1 and res.optimal


def test_brute_force_matches_path_enumeration():
    rng = np.random.default_rng(31)
    for _ in range(150):
        g1, g2 = random_pair(rng, max_n=5)
        m = random_model(rng)
        assert brute_force_ged(g1, g2, m) == pytest.approx(path_enumeration_ged(g1, g2, m), abs=1e-9)


def test_brute_force_size_limit():
    g = random_graph(np.random.default_rng(0), 9)
    with pytest.raises(ValueError):
        brute_force_ged(g, g, UNIT)


@pytest.mark.parametrize("heuristic", [True, False])
def test_astar_matches_brute_force(heuristic):
    rng = np.random.default_rng(41 + heuristic)
    for _ in range(150 if heuristic else 60):
        g1, g2 = random_pair(rng, max_n=6 if heuristic else 5)
        m = clamp_substitutions(random_model(rng))
        res = astar_ged(g1, g2, m, heuristic=heuristic)
        assert res.optimal
        assert res.value == pytest.approx(brute_force_ged(g1, g2, m), abs=1e-9)
        assert res.value == path_cost(res.path, m, g1, g2)
        assert validate_path(res.path, g1, g2) == []


def test_budget_exhaustion_returns_incumbent():
    rng = np.random.default_rng(5)
    g1, g2 = random_graph(rng, 7), random_graph(rng, 7)
    res = astar_ged(g1, g2, UNIT, budget=1)
    assert res.expanded <= 1
    assert res.value <= bipartite_ged(g1, g2, UNIT).value
    if not res.optimal:
        assert res.value >= brute_force_ged(g1, g2, UNIT)


def test_time_limit_zero_is_not_an_error():
    rng = np.random.default_rng(6)
    g1, g2 = random_graph(rng, 7), random_graph(rng, 7)
    res = astar_ged(g1, g2, UNIT, time_limit=0.0)
    assert res.value >= brute_force_ged(g1, g2, UNIT)


def test_exact_value_is_invariant_under_relabeling():
    rng = np.random.default_rng(7)
    for _ in range(20):
        g1, g2 = random_pair(rng, min_n=1)
        p1, p2 = rng.permutation(g1.n), rng.permutation(g2.n)
        assert brute_force_ged(g1.relabel_nodes(p1), g2.relabel_nodes(p2), UNIT) == brute_force_ged(g1, g2, UNIT)


def test_directed_pair():
    g1 = Graph.from_edges("AB", [(0, 1, "x")], directed=True)
    g2 = Graph.from_edges("AB", [(1, 0, "x")], directed=True)
    assert astar_ged(g1, g2, UNIT).value == 2
    assert brute_force_ged(g1, g2, UNIT) == 2
