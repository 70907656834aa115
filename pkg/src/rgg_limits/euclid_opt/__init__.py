"""Weighted Euclidean optimization: tours, matchings, spanning trees."""

from .weights import (WeightFunction, parse_weight, truncate, restrict,
                      validate_weight, BUILTIN_WEIGHTS)
from .solvers import (TourResult, MatchResult, TreeResult, tsp, hilbert_tour,
                      min_matching, bipartite_matching, bipartite_tsp, mst,
                      tour_weight, TSP_EXACT_CAP, MATCHING_EXACT_CAP)

__all__ = [
    "WeightFunction", "parse_weight", "truncate", "restrict",
    "validate_weight", "BUILTIN_WEIGHTS",
    "TourResult", "MatchResult", "TreeResult", "tsp", "hilbert_tour",
    "min_matching", "bipartite_matching", "bipartite_tsp", "mst",
    "tour_weight", "TSP_EXACT_CAP", "MATCHING_EXACT_CAP",
]
