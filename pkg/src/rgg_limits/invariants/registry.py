"""Catalog of graph functionals with their structural constants.

Each descriptor records the additivity defect constants of the functional
(or, for the linear-decomposition family, the coefficient that turns it
into one), the singleton value, and flags saying which structural
properties the property harness should expect to hold.  The domination
style constants depend on the dimension through the ball covering count,
and the counting functionals through 3**d, so the registry is built per
dimension.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Optional

from ..pointproc import PointSet
from ..geograph import build_graph, component_count, isolated_count
from .exact import (independence_number, domination_number,
                    clique_cover_number, vertex_cover_number)
from .eternal import eternal_domination_number
from .packing import h_packing_number, edge_cover_number
from .kappa import kappa_ball_constant

__all__ = ["FunctionalDescriptor", "registry",
           "FLAG_TRANSLATION", "FLAG_SUBADD", "FLAG_SUPERADD", "FLAG_BOUNDED",
           "FLAG_MONOTONE", "FLAG_ANTITONE", "FLAG_GRAPH", "FLAG_DECOMP"]

FLAG_TRANSLATION = "translation-invariant"
FLAG_SUBADD = "almost-subadditive"
FLAG_SUPERADD = "boundary-superadditive"
FLAG_BOUNDED = "bounded-small-window"
FLAG_MONOTONE = "point-monotone"
FLAG_ANTITONE = "radius-antitone"
FLAG_GRAPH = "graph-invariant"
FLAG_DECOMP = "linear-decomposition"

_CORE = frozenset({FLAG_TRANSLATION, FLAG_SUBADD, FLAG_SUPERADD,
                   FLAG_BOUNDED, FLAG_ANTITONE, FLAG_GRAPH})
_DECOMP = frozenset({FLAG_TRANSLATION, FLAG_GRAPH, FLAG_DECOMP})


@dataclass(frozen=True)
class FunctionalDescriptor:
    name: str
    evaluate: Callable[[PointSet, float], float]
    c1: Optional[float]
    c2: Optional[float]
    zeta_singleton: float
    K: Optional[float]
    c3: Optional[float]
    flags: frozenset = field(default_factory=frozenset)
    p5_bound: Optional[float] = None

    def __post_init__(self):
        if self.c1 is not None and self.c2 is not None:
            want = max(self.c1 + self.zeta_singleton,
                       self.c2 - self.zeta_singleton)
            if self.K is None or abs(self.K - want) > 1e-12:
                raise ValueError(f"{self.name}: K must equal "
                                 f"max(c1 + singleton, c2 - singleton)")


def _eval_alpha(ps, r):
    return float(independence_number(build_graph(ps, r)).value)


def _eval_gamma(ps, r):
    return float(domination_number(build_graph(ps, r)).value)


def _eval_theta(ps, r):
    return float(clique_cover_number(build_graph(ps, r)).value)


def _eval_eternal(ps, r):
    return float(eternal_domination_number(build_graph(ps, r)).value)


def _eval_isolated(ps, r):
    return float(isolated_count(build_graph(ps, r)))


def _eval_components(ps, r):
    return float(component_count(build_graph(ps, r)))


def _eval_vertex_cover(ps, r):
    return float(vertex_cover_number(build_graph(ps, r)).value)


def _eval_matching(ps, r):
    return float(h_packing_number(build_graph(ps, r), "K2").value)


def _eval_triangles(ps, r):
    return float(h_packing_number(build_graph(ps, r), "K3").value)


def _eval_paths3(ps, r):
    return float(h_packing_number(build_graph(ps, r), "P3").value)


def _eval_edge_cover(ps, r):
    return float(edge_cover_number(build_graph(ps, r)).value)


@lru_cache(maxsize=None)
def registry(dim: int) -> dict:
    """Descriptors for every supported functional in the given dimension."""
    if dim < 1:
        raise ValueError("dimension must be positive")
    kappa = float(kappa_ball_constant(dim))
    pow3 = float(3 ** dim)

    def core(name, fn, c2, monotone=False):
        flags = _CORE | ({FLAG_MONOTONE} if monotone else frozenset())
        return FunctionalDescriptor(
            name=name, evaluate=fn, c1=0.0, c2=c2, zeta_singleton=1.0,
            K=max(1.0, c2 - 1.0), c3=None, flags=frozenset(flags),
            p5_bound=1.0)

    def decomp(name, fn, c3, singleton=0.0, p5=None):
        return FunctionalDescriptor(
            name=name, evaluate=fn, c1=None, c2=None,
            zeta_singleton=singleton, K=None, c3=c3, flags=_DECOMP,
            p5_bound=p5)

    entries = [
        core("independence", _eval_alpha, 1.0, monotone=True),
        core("domination", _eval_gamma, 1.0 + kappa),
        core("clique_cover", _eval_theta, 1.0, monotone=True),
        core("eternal_domination", _eval_eternal, 1.0 + kappa, monotone=True),
        core("isolated", _eval_isolated, 1.0 + pow3),
        core("components", _eval_components, pow3),
        decomp("vertex_cover", _eval_vertex_cover, 1.0),
        decomp("matching", _eval_matching, 0.5),
        decomp("triangle_packing", _eval_triangles, 1.0 / 3.0),
        decomp("path3_packing", _eval_paths3, 1.0 / 3.0),
        decomp("edge_cover", _eval_edge_cover, 0.5),
    ]
    return {e.name: e for e in entries}
