"""
From node mappings to edit paths
================================

A partial injective mapping between the nodes of two graphs fixes a unique
restricted edit path: mapped nodes are substituted, the rest of the first
graph is removed and the rest of the second graph is inserted. Edges follow
their endpoints. This script builds such a path by hand, prints it, and
checks that the quadratic objective of the mapping equals the path cost.
"""
from gedqap import (ConstantCostModel, EpsAssignment, Graph, QapInstance, assignment_to_path,
                    format_path, objective, path_cost, validate_path)

# a propane-like chain C-C-C against an ethanol-like C-C-O with one double bond
g1 = Graph.from_edges(["C", "C", "C"], [(0, 1, "1"), (1, 2, "1")])
g2 = Graph.from_edges(["C", "C", "O"], [(0, 1, "1"), (1, 2, "2")])
costs = ConstantCostModel(cvs=1, cvd=2, cvi=2, ces=1, ced=1, cei=1)

###############################################################################
# Map the chains onto each other in order. Node 2 changes label and the
# bond between 1 and 2 changes order.
straight = EpsAssignment((0, 1, 2), g2.n)
path = assignment_to_path(straight, g1, g2)
print(format_path(path))
print("cost", path_cost(path, costs, g1, g2))

###############################################################################
# Dropping the last carbon instead removes one node and one edge, then
# inserts the oxygen with its bond.
partial = EpsAssignment((0, 1, None), g2.n)
other = assignment_to_path(partial, g1, g2)
print(format_path(other))
print("cost", path_cost(other, costs, g1, g2))

###############################################################################
# Both paths are valid, and the quadratic objective of each mapping is the
# cost of its path.
inst = QapInstance.from_graphs(g1, g2, costs)
for a, p in ((straight, path), (partial, other)):
    assert validate_path(p, g1, g2) == []
    print(a.mapping, objective(inst, a), path_cost(p, costs, g1, g2))
