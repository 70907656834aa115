"""Point-process samplers: i.i.d. samples, coupled Poisson samples, and
homogeneous Poisson points in a half-open cube.

All samplers are pure functions of (arguments, seed). The i.i.d. stream is
generated one fixed-width uniform row per point, so the first n points are
identical for every sample drawn from the same seed regardless of how many
points are requested (this prefix property is what couples the binomial and
Poisson samples).
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

from ._rng import substream

__all__ = [
    "Distribution",
    "PointSet",
    "CoupledSample",
    "uniform_cube",
    "blocked",
    "segment_mixture",
    "sample_binomial",
    "sample_poisson_coupled",
    "sample_homogeneous_box",
    "transform",
]

_MASS_TOL = 1e-12
# Stream layout: one row of (2 + dim) uniforms per point:
#   row[0] selects the mixture component, row[1] selects the cell along the
#   flattened density grid (or the position along a segment), row[2:] are the
#   in-cell coordinates.
_REPAIR_TAG = 0xC011DE


@dataclass(frozen=True)
class PointSet:
    """Ordered finite set of d-dimensional points (the generative order of the
    i.i.d. stream is part of the object's identity)."""

    dim: int
    points: np.ndarray  # shape (n, dim), float64

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float).reshape(-1, self.dim)
        if not np.all(np.isfinite(pts)):
            raise ValueError("points must have finite coordinates")
        object.__setattr__(self, "points", pts)
        pts.setflags(write=False)

    def __len__(self) -> int:
        return self.points.shape[0]

    def prefix(self, n: int) -> "PointSet":
        return PointSet(self.dim, self.points[:n])

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["dim", self.dim])
        for row in self.points:
            w.writerow([repr(float(v)) for v in row])
        return buf.getvalue()

    @staticmethod
    def from_csv(text: str) -> "PointSet":
        rows = list(csv.reader(io.StringIO(text)))
        rows = [r for r in rows if r]
        if not rows or rows[0][0].strip() != "dim":
            raise ValueError("expected header row 'dim,<d>'")
        dim = int(rows[0][1])
        pts = [[float(v) for v in r[:dim]] for r in rows[1:]]
        return PointSet(dim, np.array(pts, dtype=float).reshape(-1, dim))


@dataclass(frozen=True)
class Distribution:
    """Mixture of an absolutely continuous part (piecewise-constant density on
    a grid of half-open subcubes of Q_M, side 1/m) and uniform measures on
    finitely many line segments. `uniform_cube(d)` is the plain uniform law on
    the half-open unit cube Q_1."""

    dim: int
    grid_m: int = 1          # cells per unit length
    grid_M: int = 1          # density supported on Q_M = [-M/2, M/2)^d
    cell_values: np.ndarray = field(default=None)  # shape (m*M,)*dim, f >= 0
    segments: tuple = ()     # ((a, b, mass), ...) with a, b d-vectors

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dim must be a positive integer")
        side = self.grid_m * self.grid_M
        vals = self.cell_values
        if vals is None:
            vals = np.ones((side,) * self.dim) if self.grid_M else None
        vals = np.asarray(vals, dtype=float)
        if vals.shape != (side,) * self.dim:
            raise ValueError("cell_values must have shape (m*M,)^dim")
        if np.any(vals < 0):
            raise ValueError("density cell values must be nonnegative")
        segs = []
        for a, b, mass in self.segments:
            a = np.asarray(a, dtype=float).reshape(self.dim)
            b = np.asarray(b, dtype=float).reshape(self.dim)
            if mass < 0:
                raise ValueError("segment masses must be nonnegative")
            if not np.linalg.norm(b - a) > 0:
                raise ValueError("segments must have positive length (the "
                                 "measure must be diffuse)")
            segs.append((a, b, float(mass)))
        object.__setattr__(self, "cell_values", vals)
        object.__setattr__(self, "segments", tuple(segs))
        if abs(self.total_mass() - 1.0) > _MASS_TOL:
            raise ValueError(
                f"total mass {self.total_mass()!r} deviates from 1 by more "
                f"than {_MASS_TOL}")

    def cell_volume(self) -> float:
        return (1.0 / self.grid_m) ** self.dim

    def ac_mass(self) -> float:
        return float(self.cell_values.sum() * self.cell_volume())

    def total_mass(self) -> float:
        return self.ac_mass() + sum(m for _, _, m in self.segments)

    def density_at(self, x: np.ndarray) -> float:
        """f_mu at x (0 outside the grid support)."""
        x = np.asarray(x, dtype=float)
        half = self.grid_M / 2.0
        if np.any(x < -half) or np.any(x >= half):
            return 0.0
        idx = np.floor((x + half) * self.grid_m).astype(int)
        idx = np.clip(idx, 0, self.grid_m * self.grid_M - 1)
        return float(self.cell_values[tuple(idx)])


def uniform_cube(dim: int) -> Distribution:
    """mu_U: uniform on the half-open unit cube Q_1."""
    return Distribution(dim=dim, grid_m=1, grid_M=1,
                        cell_values=np.ones((1,) * dim))


def blocked(dim: int, m: int, M: int, values) -> Distribution:
    """Piecewise-constant density on subcubes of Q_M with side 1/m."""
    return Distribution(dim=dim, grid_m=m, grid_M=M,
                        cell_values=np.asarray(values, dtype=float))


def segment_mixture(dim: int, segments, ac: Distribution | None = None,
                    ac_weight: float = 0.0) -> Distribution:
    """Mixture of segment measures with an optional a.c. part scaled to
    `ac_weight`. Masses must sum to 1 - ac_weight."""
    if ac is None:
        side = 1
        vals = np.zeros((side,) * dim)
        m = M = 1
    else:
        vals = ac.cell_values * ac_weight / max(ac.ac_mass(), 1e-300)
        m, M = ac.grid_m, ac.grid_M
    return Distribution(dim=dim, grid_m=m, grid_M=M, cell_values=vals,
                        segments=tuple(segments))


@dataclass(frozen=True)
class CoupledSample:
    """Shared i.i.d. stream plus an independent Poisson count: X_n is the
    first n stream points, P_t the first N_t."""

    stream_seed: int
    dim: int
    t: float
    poisson_count: int
    prefix_points: np.ndarray  # at least max(poisson_count, requested n) rows
    binomial_n: int = 0

    def binomial(self, n: int | None = None) -> PointSet:
        n = self.binomial_n if n is None else n
        if n > self.prefix_points.shape[0]:
            raise ValueError("requested prefix longer than generated stream")
        return PointSet(self.dim, self.prefix_points[:n])

    def poisson(self) -> PointSet:
        return PointSet(self.dim, self.prefix_points[:self.poisson_count])


def _stream_rows(seed: int, n: int, dim: int) -> np.ndarray:
    # Philox fills row-major, so row i only depends on (seed, i): prefixes of
    # longer draws agree with shorter draws bit for bit.
    return substream(seed).random((n, dim + 2))


def _rows_to_points(mu: Distribution, rows: np.ndarray) -> np.ndarray:
    n = rows.shape[0]
    d = mu.dim
    out = np.empty((n, d))
    if n == 0:
        return out

    # Mixture selection: [0, ac_mass) -> a.c. cells, then segment intervals.
    weights = [mu.ac_mass()] + [m for _, _, m in mu.segments]
    cum = np.cumsum(weights)
    cum[-1] = max(cum[-1], 1.0)  # guard fp undershoot of the total mass
    comp = np.searchsorted(cum, rows[:, 0], side="right")
    comp = np.minimum(comp, len(weights) - 1)

    ac_mask = comp == 0
    if np.any(ac_mask):
        flat = mu.cell_values.ravel()
        cprob = np.cumsum(flat)
        if cprob[-1] <= 0:
            raise ValueError("a.c. component selected but density is zero")
        cprob = cprob / cprob[-1]
        cell = np.searchsorted(cprob, rows[ac_mask, 1], side="right")
        cell = np.minimum(cell, flat.size - 1)
        idx = np.unravel_index(cell, mu.cell_values.shape)
        side = 1.0 / mu.grid_m
        half = mu.grid_M / 2.0
        lo = np.stack(idx, axis=1) * side - half
        out[ac_mask] = lo + rows[ac_mask, 2:2 + d] * side

    for k, (a, b, _m) in enumerate(mu.segments):
        mask = comp == k + 1
        if np.any(mask):
            tpar = rows[mask, 1]
            out[mask] = a[None, :] + tpar[:, None] * (b - a)[None, :]
    return out


def _repair_collisions(mu: Distribution, pts: np.ndarray, seed: int) -> np.ndarray:
    """Resample exact duplicates (probability 0 in exact reals)."""
    if pts.shape[0] < 2:
        return pts
    order = np.lexsort(pts.T[::-1])
    srt = pts[order]
    dup_sorted = np.all(srt[1:] == srt[:-1], axis=1)
    if not np.any(dup_sorted):
        return pts
    pts = pts.copy()
    seen = set()
    for i in range(pts.shape[0]):
        key = tuple(pts[i])
        if key not in seen:
            seen.add(key)
            continue
        for attempt in range(100):
            row = substream(seed, _REPAIR_TAG, i, attempt).random((1, mu.dim + 2))
            cand = _rows_to_points(mu, row)[0]
            if tuple(cand) not in seen:
                pts[i] = cand
                seen.add(tuple(cand))
                break
        else:
            raise RuntimeError("could not resolve duplicate point; is the "
                               "distribution diffuse?")
    return pts


def sample_binomial(mu: Distribution, n: int, seed: int) -> PointSet:
    """X_n: n i.i.d. points from mu. Deterministic given seed; X_n is a prefix
    of X_m for n <= m at the same seed."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    rows = _stream_rows(seed, n, mu.dim)
    pts = _rows_to_points(mu, rows)
    pts = _repair_collisions(mu, pts, seed)
    return PointSet(mu.dim, pts)


def sample_poisson_coupled(mu: Distribution, t: float, seed: int,
                           n: int = 0) -> CoupledSample:
    """Coupled (X_n, P_t): shared stream, N_t ~ Poisson(t) independent."""
    if not t > 0:
        raise ValueError("t must be positive")
    n_t = int(substream(seed, 1).poisson(t))
    need = max(n_t, n)
    rows = _stream_rows(seed, need, mu.dim)
    pts = _rows_to_points(mu, rows)
    pts = _repair_collisions(mu, pts, seed)
    return CoupledSample(stream_seed=seed, dim=mu.dim, t=float(t),
                         poisson_count=n_t, prefix_points=pts, binomial_n=n)


def sample_homogeneous_box(lam: float, s: float, dim: int, seed: int) -> PointSet:
    """H_{lambda,s}: homogeneous Poisson process of intensity lam restricted to
    the half-open cube Q_s = [-s/2, s/2)^d."""
    if not lam > 0:
        raise ValueError("lambda must be positive")
    if not s > 0:
        raise ValueError("s must be positive")
    rng = substream(seed)
    count = int(rng.poisson(lam * s ** dim))
    pts = (rng.random((count, dim)) - 0.5) * s
    return PointSet(dim, pts)


def transform(ps: PointSet, scale: float, shift=0.0) -> PointSet:
    """scale * ps + shift (realizes zeta_r(X) = zeta(r^{-1} X))."""
    if not scale > 0:
        raise ValueError("scale must be positive")
    shift = np.broadcast_to(np.asarray(shift, dtype=float), (ps.dim,))
    return PointSet(ps.dim, ps.points * scale + shift)
