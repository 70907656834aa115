"""Monte Carlo estimators for per-point limiting rates.

Two routes to the same constant:

* box route: sample a homogeneous process on a large box, solve the
  functional on the unit-radius graph, divide by the expected point count;
* cluster route: attach the origin to a homogeneous process (adding a point
  at the origin does not change the law elsewhere), extract the origin's
  cluster, and average ``value(cluster) / |cluster|``.  For functionals that
  add up over clusters both averages converge to the same rate; the cluster
  route has no boundary bias.

The cluster route must see the *whole* cluster of the origin.  Starting
from a moderate window, the realization is extended outward ring by ring
(each ring drawn once from its own substream and kept), and the cluster is
accepted only when every member sits more than one unit inside the current
window -- so no point outside could attach to it.  Re-drawing the whole
window instead would bias the estimate toward small clusters.

Replications are indexed by their absolute position (``rep_offset`` + local
index), each owning a fixed substream, so splitting a run into chunks for a
worker pool and merging the chunk reports reproduces the single-process
result exactly.
"""

from __future__ import annotations

import math
import time

import numpy as np

from ..geograph import build_graph, cluster_of
from ..invariants import (BudgetExceeded, clique_cover_number,
                          domination_number, independence_number, registry)
from ..invariants.registry import FLAG_MONOTONE
from ..pointproc import PointSet, sample_homogeneous_box
from .._rng import derive_seed, substream
from .densities import unit_ball_volume
from .reports import EstimatorReport, _REFERENCES

__all__ = ["estimate_rho_box", "estimate_rho_cluster", "rho_curve_sweep",
           "sweep_structure_flags"]

_BOX, _CLUSTER, _SWEEP = 1, 2, 3

#: default ceiling on the expected instance size lambda * s**d of one box
#: replication; above it the run is refused up front rather than hanging.
DEFAULT_EXPECTED_CAP = 250_000.0


def _solve(functional: str, ps: PointSet, solver: str) -> float:
    """Evaluate one functional on the unit-radius graph of ``ps``.

    ``solver='heuristic'`` returns a certified one-sided value where the
    exact solver would be too slow: the size of an independent set found
    greedily (lower bound), a greedy dominating or clique-cover count
    (upper bounds).  Counting functionals are always exact.
    """
    desc = registry(ps.dim)[functional]
    if solver == "exact":
        return desc.evaluate(ps, 1.0)
    if functional == "independence":
        return float(independence_number(build_graph(ps, 1.0), mode="heuristic").lower)
    if functional == "domination":
        return float(domination_number(build_graph(ps, 1.0), mode="heuristic").value)
    if functional == "clique_cover":
        return float(clique_cover_number(build_graph(ps, 1.0), mode="heuristic").value)
    # cheap exact counts: no heuristic needed
    return desc.evaluate(ps, 1.0)


def _summary(values):
    arr = np.asarray(values, dtype=float)
    mean = float(arr.mean())
    stderr = float(arr.std(ddof=1) / np.sqrt(arr.size)) if arr.size > 1 else 0.0
    return mean, stderr


def estimate_rho_box(functional: str, dim: int, lam: float, s: float,
                     reps: int, seed: int, solver: str = "exact",
                     expected_cap: float = DEFAULT_EXPECTED_CAP,
                     rep_offset: int = 0) -> EstimatorReport:
    """Box-route estimate of the per-point rate at intensity ``lam``.

    Each repetition draws a homogeneous sample on a side-``s`` box from its
    own substream, solves the functional at unit radius and normalizes by
    the expected count ``lam * s**dim``.  If a replication exhausts the
    exact-solver budget the run stops there and the partial report is
    flagged in ``meta`` rather than silently averaging fewer draws.
    """
    t = lam * s**dim
    if t > expected_cap:
        raise ValueError(
            f"expected instance size {t:.3g} exceeds the cap {expected_cap:.3g}; "
            "raise expected_cap explicitly or use the heuristic solver")
    t0 = time.perf_counter()
    vals, counts = [], []
    partial = False
    for rep in range(rep_offset, rep_offset + reps):
        ps = sample_homogeneous_box(lam, s, dim, derive_seed(seed, _BOX, rep))
        try:
            v = _solve(functional, ps, solver)
        except BudgetExceeded:
            partial = True
            break
        counts.append(ps.points.shape[0])
        vals.append(v / t)
    if not vals:
        raise BudgetExceeded(
            f"no replication of {functional} completed within the solver "
            "budget; reduce lambda*s^d or use the heuristic solver")
    mean, stderr = _summary(vals)
    meta = {"solver": solver, "completed_reps": len(vals)}
    if partial:
        meta["partial"] = True
    return EstimatorReport(
        mode="box", functional=functional, d=dim, lam=lam, s=s,
        n=float(np.mean(counts)), t=t, reps=len(vals), mean=mean,
        stderr=stderr, seed=seed,
        elapsed_ms=(time.perf_counter() - t0) * 1e3,
        values=vals, meta=meta,
    )


def _origin_cluster_value(functional: str, dim: int, lam: float, seed_parts,
                          s0: float, cluster_cap: int, max_doublings: int):
    """One cluster-route draw: value(cluster of origin) / |cluster|."""
    pts = [np.zeros((1, dim))]
    s = s0
    rng0 = substream(*seed_parts, 0)
    count = rng0.poisson(lam * s0**dim)
    pts.append((rng0.random((count, dim)) - 0.5) * s0)
    for ring in range(1, max_doublings + 1):
        arr = np.vstack(pts)
        g = build_graph(PointSet(dim, arr), 1.0)
        members = cluster_of(g, 0).members
        if len(members) > cluster_cap:
            raise RuntimeError(
                f"origin cluster exceeded {cluster_cap} points at "
                f"intensity {lam}; the cluster route needs subcritical input")
        member_pts = arr[list(members)]
        if s / 2 - np.abs(member_pts).max() > 1.0:
            ps = PointSet(dim, member_pts)
            desc = registry(dim)[functional]
            return desc.evaluate(ps, 1.0) / len(members), len(members)
        # extend: draw the surrounding ring (kept for all later rounds)
        rng = substream(*seed_parts, ring)
        s_new = 2.0 * s
        vol = s_new**dim - s**dim
        need = rng.poisson(lam * vol)
        got = []
        taken = 0
        while taken < need:
            cand = (rng.random((max(64, need - taken), dim)) - 0.5) * s_new
            keep = cand[np.abs(cand).max(axis=1) > s / 2]
            if keep.shape[0] > need - taken:
                keep = keep[: need - taken]
            got.append(keep)
            taken += keep.shape[0]
        if got:
            pts.append(np.vstack(got))
        s = s_new
    raise RuntimeError("window doubling budget exhausted without isolating "
                       "the origin cluster")


def estimate_rho_cluster(functional: str, dim: int, lam: float, reps: int,
                         seed: int, s0: float = 8.0,
                         cluster_cap: int = 100_000,
                         max_doublings: int = 14,
                         rep_offset: int = 0) -> EstimatorReport:
    """Cluster-route estimate of the per-point rate at intensity ``lam``.

    Only meaningful for functionals that add up over clusters -- the ones
    whose merge defect below is zero (c1 = 0); rejects the others.  Each
    repetition isolates the origin's cluster in a coupled, outward-extended
    realization and contributes value/size.  Subcriticality of ``lam`` is
    the caller's assertion; a cluster growing past ``cluster_cap`` aborts
    the run with a possibly-supercritical diagnostic.
    """
    desc = registry(dim)[functional]
    if desc.c1 != 0.0:
        raise ValueError(
            f"{functional!r} does not decompose over clusters (its merge "
            "defect constant is not zero); use the box route")
    t0 = time.perf_counter()
    vals, sizes = [], []
    for rep in range(rep_offset, rep_offset + reps):
        v, k = _origin_cluster_value(functional, dim, lam,
                                     (seed, _CLUSTER, rep), s0,
                                     cluster_cap, max_doublings)
        vals.append(v)
        sizes.append(k)
    mean, stderr = _summary(vals)
    return EstimatorReport(
        mode="cluster", functional=functional, d=dim, lam=lam, s=None,
        n=float(np.mean(sizes)), t=None, reps=reps, mean=mean, stderr=stderr,
        seed=seed, elapsed_ms=(time.perf_counter() - t0) * 1e3,
        values=vals, meta={"s0": s0},
    )


def rho_curve_sweep(functional: str, dim: int, lams, s: float, reps: int,
                    seed: int, solver: str = "exact",
                    estimator: str = "box") -> list[EstimatorReport]:
    """Rate estimates across intensities, one report per intensity.

    Each report's ``meta`` carries the intensity-scaled rate
    ``lambda_rho = lam * mean`` (and its stderr), the quantity whose limit
    is bounded by the best packing density.  Run
    :func:`sweep_structure_flags` on the result to check the structural
    expectations across the curve.
    """
    out = []
    for idx, lam in enumerate(lams):
        sub = derive_seed(seed, _SWEEP, idx)
        if estimator == "box":
            rep = estimate_rho_box(functional, dim, lam, s, reps, sub,
                                   solver=solver)
        elif estimator == "cluster":
            rep = estimate_rho_cluster(functional, dim, lam, reps, sub)
        else:
            raise ValueError(f"unknown estimator {estimator!r}")
        rep.meta["lambda_rho"] = lam * rep.mean
        rep.meta["lambda_rho_stderr"] = lam * rep.stderr
        out.append(rep)
    return out


def sweep_structure_flags(functional: str, dim: int, reports) -> dict:
    """Structural checks on a sweep of rate estimates across intensities.

    Returns one entry per check with ``ok`` True/False, or None when the
    check does not apply to this functional/dimension:

    * ``bounded_by_reference``: lam * rho(lam) stays below the exact
      boxed-supremum reference (best packing density) plus 3 stderr;
    * ``monotone_nondecreasing``: lam * rho(lam) nondecreasing within
      3 combined stderr, expected for point-monotone functionals;
    * ``rho_at_most_singleton``: rho(lam) <= c1 + value-on-a-singleton
      plus 3 stderr;
    * ``small_lambda_singleton``: at the smallest intensity, rho is within
      a first-order envelope of the singleton value (the chance that the
      origin's cluster is not a singleton is 1 - exp(-lam * v_d), and the
      per-point value sits in [0, 1] for these functionals).
    """
    desc = registry(dim)[functional]
    reports = sorted(reports, key=lambda r: r.lam)
    flags: dict = {}

    ref = _REFERENCES.get(("zeta_bar", dim))
    if ref is None:
        flags["bounded_by_reference"] = {"ok": None, "detail": "no reference"}
    else:
        bad = [r.lam for r in reports
               if r.lam * r.mean > ref + 3.0 * r.lam * r.stderr]
        flags["bounded_by_reference"] = {"ok": not bad, "violations": bad,
                                         "reference": ref}

    if FLAG_MONOTONE not in desc.flags:
        flags["monotone_nondecreasing"] = {"ok": None,
                                           "detail": "not point-monotone"}
    else:
        bad = []
        for a, b in zip(reports, reports[1:]):
            la, lb = a.lam * a.mean, b.lam * b.mean
            noise = 3.0 * math.hypot(a.lam * a.stderr, b.lam * b.stderr)
            if lb < la - noise:
                bad.append((a.lam, b.lam))
        flags["monotone_nondecreasing"] = {"ok": not bad, "violations": bad}

    if desc.c1 is None:
        flags["rho_at_most_singleton"] = {"ok": None,
                                          "detail": "no merge constants"}
    else:
        cap = desc.c1 + desc.zeta_singleton
        bad = [r.lam for r in reports if r.mean > cap + 3.0 * r.stderr]
        flags["rho_at_most_singleton"] = {"ok": not bad, "violations": bad,
                                          "cap": cap}

    if desc.c1 != 0.0:
        flags["small_lambda_singleton"] = {"ok": None,
                                           "detail": "needs zero merge defect"}
    else:
        r0 = reports[0]
        envelope = 1.0 - math.exp(-r0.lam * unit_ball_volume(dim))
        tol = envelope + 3.0 * r0.stderr + 0.01
        gap = abs(r0.mean - desc.zeta_singleton)
        flags["small_lambda_singleton"] = {
            "ok": gap <= tol, "lambda": r0.lam, "gap": gap, "tol": tol}
    return flags
