"""Random geometric graph limit experiments.

Point process samplers, geometric graph construction, exact combinatorial
solvers, Euclidean optimization functionals, and Monte Carlo estimators for
their thermodynamic and dense limits, with a property harness and a CLI.
"""

__version__ = "0.1.0"

from .pointproc import (Distribution, PointSet, CoupledSample,
                        sample_binomial, sample_poisson_coupled,
                        sample_homogeneous_box, transform,
                        uniform_cube, blocked, segment_mixture)
from .geograph import (GeometricGraph, Cluster, build_graph, components,
                       component_count, isolated_count, boundary_set,
                       cluster_of, edge_list_text)

__all__ = [
    "__version__",
    "Distribution", "PointSet", "CoupledSample",
    "sample_binomial", "sample_poisson_coupled", "sample_homogeneous_box",
    "transform", "uniform_cube", "blocked", "segment_mixture",
    "GeometricGraph", "Cluster", "build_graph", "components",
    "component_count", "isolated_count", "boundary_set", "cluster_of",
    "edge_list_text",
]
