"""Result containers for Monte Carlo estimators and density constructions."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

CSV_COLUMNS = ("mode", "functional", "d", "lambda", "s", "n", "t", "reps",
               "mean", "stderr", "seed", "elapsed_ms")

#: exact reference values for the limit densities, where known:
#: best packing density of points pairwise more than one apart (alpha_bar,
#: equal to the boxed-supremum rate zeta_bar), optimal unit-ball covering
#: density (kappa_bar), and minimal density of a partition into diameter-one
#: cells (theta_bar).
_REFERENCES = {
    ("alpha_bar", 1): 1.0,
    ("alpha_bar", 2): 2.0 / math.sqrt(3.0),
    ("alpha_bar", 3): math.sqrt(2.0),
    ("zeta_bar", 1): 1.0,
    ("zeta_bar", 2): 2.0 / math.sqrt(3.0),
    ("zeta_bar", 3): math.sqrt(2.0),
    ("kappa_bar", 1): 0.5,
    ("kappa_bar", 2): math.sqrt(4.0 / 27.0),
    ("theta_bar", 1): 1.0,
}


@dataclass
class EstimatorReport:
    mode: str
    functional: str
    d: int
    lam: Optional[float]
    s: Optional[float]
    n: Optional[float]
    t: Optional[float]
    reps: int
    mean: float
    stderr: float
    seed: int
    elapsed_ms: float
    values: Optional[list] = field(default=None, repr=False)
    meta: dict = field(default_factory=dict, repr=False)

    def to_row(self) -> dict:
        """Row in the canonical CSV column order."""
        return {
            "mode": self.mode,
            "functional": self.functional,
            "d": self.d,
            "lambda": "" if self.lam is None else self.lam,
            "s": "" if self.s is None else self.s,
            "n": "" if self.n is None else self.n,
            "t": "" if self.t is None else self.t,
            "reps": self.reps,
            "mean": self.mean,
            "stderr": self.stderr,
            "seed": self.seed,
            "elapsed_ms": round(self.elapsed_ms, 3),
        }


def merge_reports(chunks) -> EstimatorReport:
    """Combine chunked runs of one experiment into a single report.

    Chunks must share (mode, functional, d, lam, s, t, seed) and carry their
    per-rep values; replications own fixed substreams, so the merge is
    independent of how the reps were distributed across workers.
    """
    chunks = list(chunks)
    if not chunks:
        raise ValueError("nothing to merge")
    head = chunks[0]
    for c in chunks[1:]:
        same = (c.mode == head.mode and c.functional == head.functional
                and c.d == head.d and c.lam == head.lam and c.s == head.s
                and c.t == head.t and c.seed == head.seed)
        if not same:
            raise ValueError("chunks describe different experiments")
    values = [v for c in chunks for v in (c.values or [])]
    if len(values) != sum(c.reps for c in chunks):
        raise ValueError("chunks must retain per-rep values to merge")
    arr = np.asarray(values, dtype=float)
    stderr = float(arr.std(ddof=1) / math.sqrt(arr.size)) if arr.size > 1 else 0.0
    weights = np.array([c.reps for c in chunks], dtype=float)
    ns = [c.n for c in chunks]
    n = None
    if all(v is not None for v in ns):
        n = float(np.average(ns, weights=weights))
    meta = dict(head.meta)
    # per-rep meta recombines the same way the values do (chunks arrive in
    # rep_offset order), so the merge stays independent of the worker split
    for key in ("heuristic_reps", "completed_reps"):
        if any(key in c.meta for c in chunks):
            meta[key] = sum(c.meta.get(key, 0) for c in chunks)
    if any("covering_bounds" in c.meta for c in chunks):
        merged = {}
        for c in chunks:
            for k, seq in c.meta.get("covering_bounds", {}).items():
                merged.setdefault(k, []).extend(seq)
        meta["covering_bounds"] = merged
    if any(c.meta.get("partial") for c in chunks):
        meta["partial"] = True
    meta["merged_chunks"] = len(chunks)
    return EstimatorReport(
        mode=head.mode, functional=head.functional, d=head.d, lam=head.lam,
        s=head.s, n=n, t=head.t, reps=int(arr.size), mean=float(arr.mean()),
        stderr=stderr, seed=head.seed,
        elapsed_ms=sum(c.elapsed_ms for c in chunks), values=values, meta=meta)


@dataclass
class DensityConstant:
    name: str
    dim: int
    s: float
    count: int
    value: float          # count / s**dim
    reference: float      # exact limit constant the construction approaches
    rel_err: float
    verified: bool
    constant: str = ""    # which limit density this speaks about
    kind: str = ""        # exact-reference | lower-bound | upper-bound
    meta: dict = field(default_factory=dict)


def reference_constant(name: str, dim: int) -> DensityConstant:
    """Exact reference value of a limit density, where one is known."""
    key = (name, dim)
    if key not in _REFERENCES:
        raise KeyError(f"no exact reference for {name} in dimension {dim}")
    v = _REFERENCES[key]
    return DensityConstant(name=name, dim=dim, s=float("inf"), count=0,
                           value=v, reference=v, rel_err=0.0, verified=True,
                           constant=name, kind="exact-reference")
