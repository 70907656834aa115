"""Law-of-large-numbers convergence experiments in two scaling regimes.

Both runners draw n i.i.d. points from a distribution and evaluate
``zeta_r(X) = zeta(X / r)`` along a grid of sample sizes:

* thermodynamic regime: n * r_n^d is held at a constant t, so the expected
  number of points within range of a typical point stays O(1); reported
  value is ``zeta_{r_n}(X_n) / n``;
* dense regime: r_n -> 0 but n * r_n^d -> infinity; reported value is
  ``r_n^d * zeta_{r_n}(X_n)`` (default rule r_n = n^{-1/(2d)}).

Replications share their stream across the n-grid (the sampler's prefix
property), which smooths convergence tables without affecting the law of
any single entry; each absolute replication index owns a fixed substream,
so chunked runs merge to the single-process result.

When an exact solve exhausts its search budget at large n, the replication
is redone with the certified heuristic and the report is marked, never
silently mixed.
"""

from __future__ import annotations

import time

import numpy as np

from ..geograph import build_graph
from ..invariants import (BudgetExceeded, clique_cover_number,
                          domination_number, independence_number,
                          eternal_domination_number, registry)
from ..pointproc import Distribution, PointSet, sample_binomial, transform
from ..euclid_opt import (tsp, min_matching, mst, parse_weight,
                          WeightFunction, TSP_EXACT_CAP, MATCHING_EXACT_CAP)
from .._rng import derive_seed
from .densities import domination_bounds_via_covering
from .reports import EstimatorReport

__all__ = ["lln_thermo_run", "lln_dense_run", "default_dense_radius"]

_THERMO, _DENSE = 4, 5

#: weighted Euclidean functionals accepted alongside the graph functionals
WEIGHTED_FUNCTIONALS = ("tsp", "mm", "mst")


def default_dense_radius(dim: int):
    """Default dense-regime radius rule r_n = n^(-1/(2d)): it vanishes while
    n * r_n^d = n^(1/2) still diverges."""
    return lambda n: float(n) ** (-1.0 / (2.0 * dim))


def _heuristic_graph_value(functional: str, ps: PointSet, r: float) -> float:
    """Certified one-sided stand-in when the exact search is out of budget."""
    g = build_graph(ps, r)
    if functional == "independence":
        return float(independence_number(g, mode="heuristic").lower)
    if functional == "domination":
        return float(domination_number(g, mode="heuristic").value)
    if functional == "clique_cover":
        return float(clique_cover_number(g, mode="heuristic").value)
    if functional == "eternal_domination":
        return float(eternal_domination_number(g, mode="heuristic").value)
    raise BudgetExceeded(
        f"{functional} has no heuristic fallback; shrink the instance")


def _zeta_at(functional: str, ps: PointSet, r: float, solver: str,
             weight: WeightFunction | None):
    """One evaluation of zeta_r; returns (value, used_heuristic)."""
    if functional in WEIGHTED_FUNCTIONALS:
        w = parse_weight("pow:1") if weight is None else weight
        scaled = transform(ps, 1.0 / r)
        n = len(ps)
        if functional == "tsp":
            mode = "exact" if solver == "exact" and n <= TSP_EXACT_CAP else "heuristic"
            res = tsp(scaled, w, mode=mode)
        elif functional == "mm":
            mode = "exact" if solver == "exact" and n <= MATCHING_EXACT_CAP else "heuristic"
            res = min_matching(scaled, w, mode=mode)
        else:
            res = mst(scaled, w)
        return float(res.weight), not res.exact
    desc = registry(ps.dim)[functional]
    if solver == "exact":
        try:
            return desc.evaluate(ps, r), False
        except BudgetExceeded:
            return _heuristic_graph_value(functional, ps, r), True
        except ValueError:
            # the eternal-domination solver refuses oversized components in
            # exact mode instead of spending an unbounded budget
            if functional != "eternal_domination":
                raise
            return _heuristic_graph_value(functional, ps, r), True
    return _heuristic_graph_value(functional, ps, r), True


def _run_grid(regime: int, functional: str, mu: Distribution, n_grid, reps,
              seed, radius_of, normalize, solver, weight, rep_offset):
    reports = []
    for n in n_grid:
        n = int(n)
        r_n = float(radius_of(n))
        t0 = time.perf_counter()
        vals = []
        heuristic_reps = 0
        bounds_meta = {"lower": [], "upper": [], "sandwich_ok": []} \
            if functional == "domination" and regime == _DENSE else None
        bounds_note = None
        for rep in range(rep_offset, rep_offset + reps):
            ps = sample_binomial(mu, n, derive_seed(seed, regime, rep))
            raw, used_heur = _zeta_at(functional, ps, r_n, solver, weight)
            heuristic_reps += used_heur
            vals.append(normalize(raw, n, r_n))
            if bounds_meta is not None:
                try:
                    b = domination_bounds_via_covering(ps.points, r_n)
                except ValueError as exc:  # support larger than Q_1
                    bounds_meta, bounds_note = None, str(exc)
                    continue
                lo = b["lower"] if b["lower"] is not None else float("-inf")
                bounds_meta["lower"].append(lo * r_n**mu.dim)
                bounds_meta["upper"].append(b["upper"] * r_n**mu.dim)
                bounds_meta["sandwich_ok"].append(bool(lo <= raw <= b["upper"]))
        arr = np.asarray(vals, dtype=float)
        stderr = float(arr.std(ddof=1) / np.sqrt(arr.size)) if arr.size > 1 else 0.0
        meta = {"solver": solver, "heuristic_reps": heuristic_reps,
                "mu_dim": mu.dim}
        if weight is not None:
            meta["weight"] = weight.name
        if bounds_meta is not None:
            meta["covering_bounds"] = bounds_meta
        elif bounds_note is not None:
            meta["covering_bounds_skipped"] = bounds_note
        mode = "thermo" if regime == _THERMO else "dense"
        reports.append(EstimatorReport(
            mode=mode, functional=functional, d=mu.dim, lam=None, s=None,
            n=float(n), t=(n * r_n**mu.dim if regime == _THERMO else None),
            reps=reps, mean=float(arr.mean()), stderr=stderr, seed=seed,
            elapsed_ms=(time.perf_counter() - t0) * 1e3, values=vals,
            meta={**meta, "r_n": r_n}))
    return reports


def lln_thermo_run(functional: str, mu: Distribution, t: float, n_grid,
                   reps: int, seed: int, solver: str = "exact",
                   weight: WeightFunction | None = None,
                   rep_offset: int = 0) -> list[EstimatorReport]:
    """Convergence table of zeta_{r_n}(X_n) / n with n * r_n^d fixed at t.

    ``functional`` is a registered graph functional name or one of
    ``WEIGHTED_FUNCTIONALS`` (then ``weight`` applies).  The radius follows
    r_n = (t / n)^(1/d) on the fixed support of ``mu``.
    """
    if not t > 0:
        raise ValueError("t must be positive")
    return _run_grid(_THERMO, functional, mu, n_grid, reps, seed,
                     radius_of=lambda n: (t / n) ** (1.0 / mu.dim),
                     normalize=lambda raw, n, r: raw / n,
                     solver=solver, weight=weight, rep_offset=rep_offset)


def lln_dense_run(functional: str, mu: Distribution, r_rule, n_grid,
                  reps: int, seed: int, solver: str = "exact",
                  weight: WeightFunction | None = None,
                  rep_offset: int = 0) -> list[EstimatorReport]:
    """Convergence table of r_n^d * zeta_{r_n}(X_n) in the dense regime.

    ``r_rule`` maps n to r_n and must satisfy r_n -> 0 with n * r_n^d -> oo;
    None selects the default n^(-1/(2d)).  For the domination functional
    each replication also computes the certified covering-net bounds on its
    own instance, recorded in ``meta['covering_bounds']`` (normalized by
    r_n^d, with a per-replication sandwich verdict).
    """
    radius_of = default_dense_radius(mu.dim) if r_rule is None else r_rule
    return _run_grid(_DENSE, functional, mu, n_grid, reps, seed,
                     radius_of=radius_of,
                     normalize=lambda raw, n, r: raw * r**mu.dim,
                     solver=solver, weight=weight, rep_offset=rep_offset)
