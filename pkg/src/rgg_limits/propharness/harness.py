"""Randomized property harness for the functional catalog.

Each property id names a structural guarantee; the harness draws random
instances and checks the corresponding inequality with the constants
recorded in the registry:

* ``P2``   translation invariance
* ``P3``   near subadditivity over merges (defect at most c1 per merge),
           including the direct k-part form with defect (k-1)*c1
* ``P4``   superadditivity up to c2 per boundary point, including the
           direct k-part form over region splits, where the defect is c2
           times the number of points within r of each region boundary
* ``P5'``  boundedness on point sets inside a ball of radius r/2
* ``P6``   monotonicity under adding a point
* ``P7``   antitonicity in the radius
* ``P8``   dependence on the graph only (rigid motions, relabeling,
           adjacency-preserving jitter)
* ``SMOOTH``        adding one point changes the value by at most K
* ``CHAIN``         domination <= independence <= eternal <= clique cover
                    on one instance
* ``EDGECOVER-ID``  cover-matching-isolated counting identity
* ``MULTIGUARD``    multiple guards per vertex do not help
* ``MST-COMPONENTS`` spanning-tree weight under the indicator profile
                     counts the components at unit radius minus one
* ``W-VALIDATE``    built-in weight profiles pass their validity report

Functionals carrying the linear-decomposition flag are exercised through
their bounded companion (coefficient * count minus the functional), whose
defect constants are 0 and 1; the identity itself is covered by CHAIN and
EDGECOVER-ID.

Every trial derives its own substream from (seed, property, functional,
dimension, trial index), so any failure replays in isolation and a run
split across workers merges to the same result as a sequential one.
Failure records carry the instance (points, radius, split) verbatim;
``write_failures_jsonl`` dumps them one per line.  A trial whose exact
solve exceeds its search budget is skipped and counted, never passed.
"""

from __future__ import annotations

import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ..euclid_opt import BUILTIN_WEIGHTS, mst, parse_weight, validate_weight
from ..geograph import boundary_set, build_graph, component_count, isolated_count
from ..invariants import (BudgetExceeded, FLAG_ANTITONE, FLAG_BOUNDED,
                          FLAG_DECOMP, FLAG_MONOTONE, FLAG_SUBADD,
                          FLAG_SUPERADD, clique_cover_number,
                          domination_number, eternal_domination_multiguard,
                          eternal_domination_number, independence_number,
                          registry)
from ..pointproc import PointSet
from .._rng import substream
from .generators import (adjacency_safe_jitter, random_rigid_motion,
                         sample_cloud, sample_small_ball, split_parts)

__all__ = ["PROPERTY_IDS", "PropertyCase", "CheckRecord", "PropertyResult",
           "run_property", "run_all", "write_failures_jsonl",
           "applicable_functionals"]

PROPERTY_IDS = ("P2", "P3", "P4", "P5'", "P6", "P7", "P8", "SMOOTH", "CHAIN",
                "EDGECOVER-ID", "MULTIGUARD", "MST-COMPONENTS", "W-VALIDATE")

_GLOBAL_PROPS = frozenset({"CHAIN", "EDGECOVER-ID", "MULTIGUARD",
                           "MST-COMPONENTS", "W-VALIDATE"})

# companion small-window bounds for the decomposition family
_COMPANION_P5 = {"vertex_cover": 1.0, "matching": 0.5,
                 "triangle_packing": 2.0 / 3.0, "path3_packing": 2.0 / 3.0}

_FUNC_ORDER = ("independence", "domination", "clique_cover",
               "eternal_domination", "isolated", "components",
               "vertex_cover", "matching", "triangle_packing",
               "path3_packing", "edge_cover")

_TOL = 1e-7

_DEFAULT_RADII = (0.7, 1.0, 1.4)


@dataclass(frozen=True)
class PropertyCase:
    """One cell of the property matrix: what to check, and on what kind of
    random instances (sizes, radii, split rules are drawn per trial)."""

    prop: str
    functional: Optional[str] = None
    dim: int = 2
    trials: int = 100
    seed: int = 0
    n_max: int = 20
    radii: tuple = _DEFAULT_RADII
    constants: Optional[tuple] = None  # (c1, c2) override for negative tests


@dataclass
class CheckRecord:
    """One executed check; failures keep the instance for replay."""

    prop: str
    functional: str
    dim: int
    trial: int
    seed: int
    generator: str
    passed: bool
    lhs: float
    rhs: float
    detail: dict = field(default_factory=dict)

    def to_json_dict(self):
        return {"prop": self.prop, "functional": self.functional,
                "dim": self.dim, "trial": self.trial, "seed": self.seed,
                "generator": self.generator, "passed": self.passed,
                "lhs": self.lhs, "rhs": self.rhs, "detail": self.detail}


@dataclass
class PropertyResult:
    prop: str
    functional: str
    dim: int
    seed: int
    trials: int
    instances: int
    failures: list
    skipped: int = 0
    elapsed: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json_dict(self):
        return {"prop": self.prop, "functional": self.functional,
                "dim": self.dim, "seed": self.seed, "trials": self.trials,
                "instances": self.instances,
                "failures": [c.to_json_dict() for c in self.failures],
                "skipped": self.skipped, "ok": self.ok,
                "elapsed": self.elapsed}


class _Target:
    """Functional under test with the constants the properties refer to.

    Decomposition-flagged functionals are replaced by their companion
    coefficient*count - value, which obeys the core properties with
    defect constants 0 and 1.
    """

    def __init__(self, functional: str, dim: int, constants=None,
                 use_companion: bool = True):
        desc = registry(dim)[functional]
        self.functional = functional
        self.dim = dim
        self.companion = use_companion and FLAG_DECOMP in desc.flags
        if self.companion:
            if functional not in _COMPANION_P5:
                raise ValueError(
                    f"{functional!r} has no bounded companion; only the "
                    f"identity-level properties apply")
            c3, ev = desc.c3, desc.evaluate
            self._value = lambda ps, r: c3 * len(ps) - ev(ps, r)
            self.c1, self.c2 = 0.0, 1.0
            self.K = max(c3, 1.0 - c3)
            self.p5 = _COMPANION_P5[functional]
        else:
            self._value = desc.evaluate
            self.c1, self.c2 = desc.c1, desc.c2
            self.K = desc.K
            self.p5 = desc.p5_bound
        if constants is not None:
            self.c1, self.c2 = constants
            self.K = None
        self.flags = desc.flags

    def value(self, pts: np.ndarray, r: float) -> float:
        return float(self._value(PointSet(self.dim, np.asarray(pts, float)), r))


def _n_cap(prop: str, functional: Optional[str], n_max: int) -> int:
    if functional == "eternal_domination" or prop == "CHAIN":
        return min(n_max, 12)
    if prop == "MULTIGUARD":
        return min(n_max, 10)
    return n_max


def applicable_functionals(prop: str, dim: int) -> list:
    """Functionals a property id applies to (empty for the global ids)."""
    if prop in _GLOBAL_PROPS:
        return []
    out = []
    for name in _FUNC_ORDER:
        desc = registry(dim)[name]
        comp = name in _COMPANION_P5
        if prop in ("P2", "P8"):
            out.append(name)
        elif prop == "P3" and (FLAG_SUBADD in desc.flags or comp):
            out.append(name)
        elif prop == "P4" and (FLAG_SUPERADD in desc.flags or comp):
            out.append(name)
        elif prop == "P5'" and (FLAG_BOUNDED in desc.flags or comp):
            out.append(name)
        elif prop == "P6" and FLAG_MONOTONE in desc.flags:
            out.append(name)
        elif prop == "P7" and FLAG_ANTITONE in desc.flags:
            out.append(name)
        elif prop == "SMOOTH" and (desc.K is not None or comp):
            out.append(name)
    return out


# ---------------------------------------------------------------------------
# per-property trial bodies; each returns a list of CheckRecord


def _record(cases, prop, functional, dim, trial, seed, gen, ok, lhs, rhs,
            **detail):
    cases.append(CheckRecord(prop, functional, dim, trial, seed, gen,
                             bool(ok), float(lhs), float(rhs),
                             dict(detail) if not ok else {}))


def _trial_translation(T, rng, trial, seed, n_max, radii, cases):
    gen, pts = sample_cloud(rng, T.dim, n_max)
    r = float(rng.choice(radii))
    shift = (rng.random(T.dim) - 0.5) * 1000.0
    v0 = T.value(pts, r)
    v1 = T.value(pts + shift, r)
    _record(cases, "P2", T.functional, T.dim, trial, seed, gen,
            abs(v0 - v1) <= _TOL, v0, v1,
            points=pts.tolist(), r=r, shift=shift.tolist())


def _region_boundary_counts(pts, parts, region, r):
    """Counts of points within r of each region boundary, parts 2..k.

    For a slab split the boundary of part i is its bounding cut plane(s);
    for a ball split the single boundary is the sphere.  None when the
    split was not region-based.
    """
    if region is None:
        return None
    if region["kind"] == "slab":
        coords = pts[:, region["axis"]]
        cuts = region["cuts"]
        out = []
        for i in range(1, len(parts)):
            near = np.abs(coords - cuts[i - 1]) <= r
            if i < len(cuts):
                near |= np.abs(coords - cuts[i]) <= r
            out.append(int(near.sum()))
        return out
    if region["kind"] == "ball":
        d = np.linalg.norm(pts - region["center"], axis=1)
        return [int((np.abs(d - region["radius"]) <= r).sum())]
    return None


def _trial_merge(T, rng, trial, seed, n_max, radii, cases, prop):
    gen, pts = sample_cloud(rng, T.dim, n_max, n_min=4)
    r = float(rng.choice(radii))
    k = int(rng.choice([2, 2, 3, 4]))
    sname, parts, region = split_parts(rng, pts, k)
    if len(parts) < 2:
        return
    gen = f"{gen}/{sname}"
    vals = [T.value(pts[p], r) for p in parts]
    prefix, vpre = parts[0], vals[0]
    for i in range(1, len(parts)):
        part = parts[i]
        union = np.concatenate([prefix, part])
        vu = T.value(pts[union], r)
        if prop == "P3":
            bound = vpre + vals[i] + T.c1
            _record(cases, prop, T.functional, T.dim, trial, seed, gen,
                    vu <= bound + _TOL, vu, bound,
                    points=pts.tolist(), r=r,
                    parts=[p.tolist() for p in (prefix, part)])
        else:
            ps_pre = PointSet(T.dim, pts[prefix])
            ps_part = PointSet(T.dim, pts[part])
            for tag, b in (("pre", boundary_set(ps_pre, ps_part, r)),
                           ("part", boundary_set(ps_part, ps_pre, r))):
                bound = vpre + vals[i] - T.c2 * len(b)
                _record(cases, prop, T.functional, T.dim, trial, seed,
                        f"{gen}/{tag}", vu >= bound - _TOL, vu, bound,
                        points=pts.tolist(), r=r, boundary=len(b),
                        parts=[p.tolist() for p in (prefix, part)])
        prefix, vpre = union, vu
    # direct k-part forms (vpre now holds the value on the full union)
    if prop == "P3":
        bound = sum(vals) + (len(parts) - 1) * T.c1
        _record(cases, prop, T.functional, T.dim, trial, seed,
                f"{gen}/kpart", vpre <= bound + _TOL, vpre, bound,
                points=pts.tolist(), r=r,
                parts=[p.tolist() for p in parts])
    else:
        bcounts = _region_boundary_counts(pts, parts, region, r)
        if bcounts is not None:
            bound = sum(vals) - T.c2 * sum(bcounts)
            _record(cases, prop, T.functional, T.dim, trial, seed,
                    f"{gen}/kpart", vpre >= bound - _TOL, vpre, bound,
                    points=pts.tolist(), r=r, boundary_counts=bcounts,
                    parts=[p.tolist() for p in parts])


def _trial_small_ball(T, rng, trial, seed, n_max, radii, cases):
    r = float(rng.choice(radii))
    pts = sample_small_ball(rng, T.dim, n_max, r)
    v = T.value(pts, r)
    _record(cases, "P5'", T.functional, T.dim, trial, seed, "ball-window",
            v <= T.p5 + _TOL, v, T.p5, points=pts.tolist(), r=r)


def _trial_monotone(T, rng, trial, seed, n_max, radii, cases):
    gen, pts = sample_cloud(rng, T.dim, n_max)
    r = float(rng.choice(radii))
    lo, hi = pts.min(axis=0) - 1.5 * r, pts.max(axis=0) + 1.5 * r
    y = lo + rng.random(T.dim) * (hi - lo)
    v0 = T.value(pts, r)
    v1 = T.value(np.vstack([pts, y]), r)
    _record(cases, "P6", T.functional, T.dim, trial, seed, gen,
            v1 >= v0 - _TOL, v1, v0,
            points=pts.tolist(), added=y.tolist(), r=r)


def _trial_antitone(T, rng, trial, seed, n_max, radii, cases):
    gen, pts = sample_cloud(rng, T.dim, n_max)
    r1, r2 = np.sort(0.5 + rng.random(2) * 1.3)
    if r2 - r1 < 1e-6:
        return
    v_small, v_big = T.value(pts, r1), T.value(pts, r2)
    _record(cases, "P7", T.functional, T.dim, trial, seed, gen,
            v_big <= v_small + _TOL, v_big, v_small,
            points=pts.tolist(), r1=float(r1), r2=float(r2))


def _trial_graph_invariance(T, rng, trial, seed, n_max, radii, cases):
    gen, pts = sample_cloud(rng, T.dim, n_max)
    r = float(rng.choice(radii))
    v0 = T.value(pts, r)
    variants = (("rigid", random_rigid_motion(rng, pts)),
                ("permute", pts[rng.permutation(pts.shape[0])]),
                ("jitter", adjacency_safe_jitter(rng, pts, r)))
    for tag, variant in variants:
        v = T.value(variant, r)
        _record(cases, "P8", T.functional, T.dim, trial, seed, f"{gen}/{tag}",
                abs(v - v0) <= _TOL, v, v0, points=pts.tolist(), r=r)


def _trial_smooth(T, rng, trial, seed, n_max, radii, cases):
    gen, pts = sample_cloud(rng, T.dim, n_max)
    r = float(rng.choice(radii))
    lo, hi = pts.min(axis=0) - 2 * r, pts.max(axis=0) + 2 * r
    extra = lo + rng.random(T.dim) * (hi - lo)
    v0 = T.value(pts, r)
    v1 = T.value(np.vstack([pts, extra]), r)
    _record(cases, "SMOOTH", T.functional, T.dim, trial, seed, gen,
            abs(v1 - v0) <= T.K + _TOL, abs(v1 - v0), T.K,
            points=pts.tolist(), added=extra.tolist(), r=r)


def _trial_chain(dim, rng, trial, seed, n_max, radii, cases):
    gen, pts = sample_cloud(rng, dim, n_max)
    r = float(rng.choice(radii))
    g = build_graph(PointSet(dim, pts), r)
    gamma = domination_number(g).value
    alpha = independence_number(g).value
    eternal = eternal_domination_number(g).value
    theta = clique_cover_number(g).value
    for name, lhs, rhs in (("gamma<=alpha", gamma, alpha),
                           ("alpha<=eternal", alpha, eternal),
                           ("eternal<=theta", eternal, theta)):
        _record(cases, "CHAIN", name, dim, trial, seed, gen,
                lhs <= rhs + _TOL, lhs, rhs, points=pts.tolist(), r=r)


def _trial_edgecover_id(dim, rng, trial, seed, n_max, radii, cases):
    from ..invariants import edge_cover_number, h_packing_number
    gen, pts = sample_cloud(rng, dim, n_max)
    r = float(rng.choice(radii))
    g = build_graph(PointSet(dim, pts), r)
    eta = edge_cover_number(g).value
    nu = h_packing_number(g, "K2").value
    sigma = isolated_count(g)
    _record(cases, "EDGECOVER-ID", "edge_cover", dim, trial, seed, gen,
            abs(eta + nu + sigma - g.n) <= _TOL, eta + nu + sigma, g.n,
            points=pts.tolist(), r=r)


def _trial_multiguard(dim, rng, trial, seed, n_max, radii, cases):
    gen, pts = sample_cloud(rng, dim, n_max)
    r = float(rng.choice(radii))
    g = build_graph(PointSet(dim, pts), r)
    single = eternal_domination_number(g).value
    multi = eternal_domination_multiguard(g).value
    _record(cases, "MULTIGUARD", "eternal_domination", dim, trial, seed, gen,
            single == multi, single, multi, points=pts.tolist(), r=r)


def _trial_mst_components(dim, rng, trial, seed, n_max, radii, cases):
    gen, pts = sample_cloud(rng, dim, n_max, n_min=1)
    w = parse_weight("indicator")
    ps = PointSet(dim, pts)
    weight = mst(ps, w).weight
    comps = component_count(build_graph(ps, 1.0))
    _record(cases, "MST-COMPONENTS", "components", dim, trial, seed, gen,
            abs(weight - (comps - 1)) <= _TOL, weight, comps - 1,
            points=pts.tolist())


def _check_weight_catalog(dim, seed, cases):
    specs = ["pow:2", "pow:0.5", "pow:3", "log", "indicator", "sinwave",
             "powsum:0.5:2", "trunc:pow:2:0.8", "trunc:log:1.5",
             "restrict:pow:2:0.25"]
    stems = {s.split(":", 1)[0] for s in specs}
    if not set(BUILTIN_WEIGHTS) <= stems:
        raise AssertionError("weight catalog does not cover every builtin")
    for i, spec in enumerate(specs):
        w = parse_weight(spec)
        rep = validate_weight(w, dim=dim)
        _record(cases, "W-VALIDATE", spec, dim, i, seed, "catalog",
                rep["ok"], float(rep["ok"]), 1.0, report=rep)


_GLOBAL_BODIES = {"CHAIN": _trial_chain, "EDGECOVER-ID": _trial_edgecover_id,
                  "MULTIGUARD": _trial_multiguard,
                  "MST-COMPONENTS": _trial_mst_components}

_TARGET_BODIES = {"P2": _trial_translation, "P5'": _trial_small_ball,
                  "P6": _trial_monotone, "P7": _trial_antitone,
                  "P8": _trial_graph_invariance, "SMOOTH": _trial_smooth}


# ---------------------------------------------------------------------------
# drivers


def _run_trials(case: PropertyCase, lo: int, hi: int):
    """Execute trials [lo, hi) of one case; self-contained and picklable.

    Each trial owns the substream (seed, 40, property, functional, dim,
    trial), so the result is a pure function of the case and the range.
    """
    tag = PROPERTY_IDS.index(case.prop)
    ftag = 0 if case.functional is None else \
        _FUNC_ORDER.index(case.functional) + 1
    cap = _n_cap(case.prop, case.functional, case.n_max)
    target = None
    if case.prop not in _GLOBAL_PROPS:
        target = _Target(case.functional, case.dim, constants=case.constants,
                         use_companion=case.prop in ("P3", "P4", "P5'",
                                                     "SMOOTH"))
    cases: list[CheckRecord] = []
    skipped = 0
    for trial in range(lo, hi):
        rng = substream(case.seed, 40, tag, ftag, case.dim, trial)
        try:
            if target is None:
                _GLOBAL_BODIES[case.prop](case.dim, rng, trial, case.seed,
                                          cap, case.radii, cases)
            elif case.prop in ("P3", "P4"):
                _trial_merge(target, rng, trial, case.seed, cap, case.radii,
                             cases, case.prop)
            else:
                _TARGET_BODIES[case.prop](target, rng, trial, case.seed,
                                          cap, case.radii, cases)
        except BudgetExceeded:
            skipped += 1
    return cases, skipped


def run_property(case, functional: Optional[str] = None, dim: int = 2,
                 trials: int = 100, seed: int = 0, n_max: int = 20,
                 constants=None, workers: int = 0) -> PropertyResult:
    """Check one property id with fresh random instances.

    ``case`` is a PropertyCase, or a property id string combined with the
    keyword arguments.  ``constants`` overrides (c1, c2) of the target --
    deliberately wrong values let tests confirm the harness reports
    violations.  ``workers`` > 1 splits the trial range across processes;
    per-trial substreams make the merged result identical to a sequential
    run.
    """
    if isinstance(case, str):
        case = PropertyCase(prop=case, functional=functional, dim=dim,
                            trials=trials, seed=seed, n_max=n_max,
                            constants=constants)
    if case.prop not in PROPERTY_IDS:
        raise ValueError(f"unknown property {case.prop!r}")
    t0 = time.perf_counter()

    if case.prop in _GLOBAL_PROPS and case.functional is not None:
        raise ValueError(f"{case.prop} is a cross-functional property")
    if case.prop not in _GLOBAL_PROPS and case.functional is None:
        raise ValueError(f"{case.prop} needs a functional")

    if case.prop == "W-VALIDATE":
        cases: list[CheckRecord] = []
        _check_weight_catalog(case.dim, case.seed, cases)
        skipped = 0
        case = PropertyCase(**{**case.__dict__, "trials": 1})
    elif workers and workers > 1 and case.trials >= 2 * workers:
        edges = np.linspace(0, case.trials, workers + 1).astype(int)
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_run_trials, [case] * workers,
                                  edges[:-1].tolist(), edges[1:].tolist()))
        cases = [c for part, _ in parts for c in part]
        skipped = sum(s for _, s in parts)
    else:
        cases, skipped = _run_trials(case, 0, case.trials)

    failures = [c for c in cases if not c.passed]
    return PropertyResult(prop=case.prop, functional=case.functional or "-",
                          dim=case.dim, seed=case.seed, trials=case.trials,
                          instances=len(cases), failures=failures,
                          skipped=skipped,
                          elapsed=time.perf_counter() - t0)


def default_cases(dims=(1, 2), trials: int = 60, seed: int = 0,
                  n_max: int = 20) -> list[PropertyCase]:
    """The default case matrix over every registered functional."""
    out = []
    for dim in dims:
        for prop in PROPERTY_IDS:
            if prop in _GLOBAL_PROPS:
                out.append(PropertyCase(prop=prop, dim=dim, trials=trials,
                                        seed=seed, n_max=n_max))
                continue
            for functional in applicable_functionals(prop, dim):
                out.append(PropertyCase(prop=prop, functional=functional,
                                        dim=dim, trials=trials, seed=seed,
                                        n_max=n_max))
    return out


def _run_case(case: PropertyCase) -> PropertyResult:
    return run_property(case)


def run_all(dims=(1, 2), trials: int = 60, seed: int = 0, n_max: int = 20,
            workers: int = 0) -> list:
    """The full property matrix; returns one PropertyResult per cell.

    ``workers`` > 1 distributes whole cells across a process pool; results
    come back in the deterministic cell order either way.
    """
    cells = default_cases(dims, trials, seed, n_max)
    if workers and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_run_case, cells))
    return [_run_case(c) for c in cells]


def write_failures_jsonl(results, path) -> int:
    """One JSON line per failing case; returns the number written."""
    wrote = 0
    with open(path, "w", encoding="utf-8") as fh:
        for res in results:
            for case in res.failures:
                fh.write(json.dumps(case.to_json_dict()) + "\n")
                wrote += 1
    return wrote
