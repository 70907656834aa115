"""Graph functional solvers and their structural catalog."""

from .exact import (SolveResult, BudgetExceeded, DEFAULT_NODE_BUDGET,
                    independence_number, domination_number,
                    clique_cover_number, vertex_cover_number,
                    check_independent, check_dominating,
                    check_clique_partition, check_vertex_cover)
from .eternal import (eternal_domination_number, eternal_domination_multiguard,
                      check_safe_family)
from .packing import (max_cardinality_matching, h_packing_number,
                      edge_cover_number, check_packing, check_edge_cover,
                      PATTERNS)
from .kappa import kappa_ball_constant, covering_centers, verify_ball_covering
from .registry import (FunctionalDescriptor, registry,
                       FLAG_TRANSLATION, FLAG_SUBADD, FLAG_SUPERADD,
                       FLAG_BOUNDED, FLAG_MONOTONE, FLAG_ANTITONE,
                       FLAG_GRAPH, FLAG_DECOMP)

__all__ = [
    "SolveResult", "BudgetExceeded", "DEFAULT_NODE_BUDGET",
    "independence_number", "domination_number", "clique_cover_number",
    "vertex_cover_number", "eternal_domination_number",
    "eternal_domination_multiguard", "max_cardinality_matching",
    "h_packing_number", "edge_cover_number", "kappa_ball_constant",
    "covering_centers", "verify_ball_covering", "FunctionalDescriptor",
    "registry", "check_independent", "check_dominating",
    "check_clique_partition", "check_vertex_cover", "check_safe_family",
    "check_packing", "check_edge_cover", "PATTERNS",
    "FLAG_TRANSLATION", "FLAG_SUBADD", "FLAG_SUPERADD", "FLAG_BOUNDED",
    "FLAG_MONOTONE", "FLAG_ANTITONE", "FLAG_GRAPH", "FLAG_DECOMP",
]
