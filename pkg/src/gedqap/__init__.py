"""Graph edit distance: exact search, bipartite and quadratic-assignment approximations."""

from .bench import (BenchRecord, SynthSpec, gen_synth_pair, load_dataset, run_benchmark,
                    synth_pairs, write_dataset)
from .bipartite import BipartiteResult, bipartite_ged
from .costs import (ClampedCostModel, ConstantCostModel, CostModel, LabelCostModel, PathCounts,
                    clamp_substitutions, path_cost_constant, similarity_constant)
from .editpath import (EpsAssignment, RestrictedEditPath, assignment_to_path, format_path,
                       parse_path, path_cost, path_to_assignment, validate_path)
from .exact import ExactResult, astar_ged, brute_force_ged
from .graph import (Graph, GraphError, GraphFormatError, parse_graph, read_graph, serialize_graph,
                    validate, write_graph)
from .lsap import InfeasibleError, MaskedCostMatrix, brute_force_lsap, solve_lsap
from .qap import QapInstance, QapResult, ipfp_min, objective, qap_ged

__version__ = "0.1.0"

__all__ = [
    "BenchRecord", "SynthSpec", "gen_synth_pair", "load_dataset", "run_benchmark", "synth_pairs",
    "write_dataset", "BipartiteResult", "bipartite_ged", "ClampedCostModel", "ConstantCostModel",
    "CostModel", "LabelCostModel", "PathCounts", "clamp_substitutions", "path_cost_constant",
    "similarity_constant", "EpsAssignment", "RestrictedEditPath", "assignment_to_path",
    "format_path", "parse_path", "path_cost", "path_to_assignment", "validate_path",
    "ExactResult", "astar_ged", "brute_force_ged", "Graph", "GraphError", "GraphFormatError",
    "parse_graph", "read_graph", "serialize_graph", "validate", "write_graph", "InfeasibleError",
    "MaskedCostMatrix", "brute_force_lsap", "solve_lsap", "QapInstance", "QapResult", "ipfp_min",
    "objective", "qap_ged",
]
