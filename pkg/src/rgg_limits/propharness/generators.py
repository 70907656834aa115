"""Randomized point-cloud and split generators for the property harness.

Clouds mix three textures (uniform boxes at sub/near/super-critical
density, gaussian blobs, jittered lattices) so the checked inequalities
see sparse, clustered and near-degenerate geometry.  Splits partition a
cloud into k disjoint parts by axis slabs, a ball, or uniformly at random.
"""

from __future__ import annotations

import math

import numpy as np

__all__ = ["sample_cloud", "split_parts", "random_rigid_motion",
           "adjacency_safe_jitter", "sample_small_ball"]


def sample_cloud(rng: np.random.Generator, dim: int, n_max: int,
                 n_min: int = 2):
    """Random cloud; returns (generator_name, points array)."""
    n = int(rng.integers(n_min, n_max + 1))
    kind = int(rng.integers(3))
    if kind == 0:
        c = float(rng.choice([0.7, 1.0, 1.6]))
        L = max(c * n ** (1.0 / dim), 1.0)
        return f"box{c}", (rng.random((n, dim)) - 0.5) * L
    if kind == 1:
        k = int(rng.integers(1, 4))
        L = max(n ** (1.0 / dim), 2.0)
        centers = (rng.random((k, dim)) - 0.5) * 2.0 * L
        which = rng.integers(k, size=n)
        return "blobs", centers[which] + rng.normal(size=(n, dim))
    m = max(int(math.ceil(n ** (1.0 / dim))), 2)
    cells = np.array(np.unravel_index(
        rng.permutation(m**dim)[:n], (m,) * dim)).T
    return "lattice", cells + (rng.random((n, dim)) - 0.5) * 0.9


def split_parts(rng: np.random.Generator, pts: np.ndarray, k: int):
    """Disjoint index arrays partitioning the cloud into up to k parts.

    Returns (split_name, list of non-empty index arrays, region).  Fewer
    than k parts may come back when a slab or ball is empty.  ``region``
    describes the geometric partition when the split is region-based --
    ``{"kind": "slab", "axis", "cuts"}`` with parts ordered along the axis
    and each cut placed exactly on the first point of the next slab, or
    ``{"kind": "ball", "center", "radius"}`` -- and is None for the purely
    combinatorial random split (or when a coordinate tie straddles a cut).
    """
    n = pts.shape[0]
    mode = int(rng.integers(3))
    if mode == 0 or (mode == 1 and k != 2):
        axis = int(rng.integers(pts.shape[1]))
        order = np.argsort(pts[:, axis], kind="stable")
        chunks = [c for c in np.array_split(order, k) if c.size]
        name = f"slab{k}"
        parts = [np.sort(c) for c in chunks]
        coords = pts[:, axis]
        cuts = [float(coords[c[0]]) for c in chunks[1:]]
        strict = all(coords[a[-1]] < coords[b[0]]
                     for a, b in zip(chunks, chunks[1:]))
        region = {"kind": "slab", "axis": axis, "cuts": cuts} if strict else None
        return name, parts, region
    if mode == 1:
        center = pts[int(rng.integers(n))]
        d = np.linalg.norm(pts - center, axis=1)
        rad = float(np.median(d))
        inside = np.flatnonzero(d <= rad)
        outside = np.flatnonzero(d > rad)
        name = "ball"
        parts = [p for p in (inside, outside) if p.size]
        region = {"kind": "ball", "center": center.copy(), "radius": rad} \
            if len(parts) == 2 else None
        return name, parts, region
    which = rng.integers(k, size=n)
    name = f"random{k}"
    parts = [np.flatnonzero(which == i) for i in range(k)]
    parts = [p for p in parts if p.size]
    return name, parts, None


def random_rigid_motion(rng: np.random.Generator, pts: np.ndarray) -> np.ndarray:
    """Random rotation (possibly improper) plus a large translation."""
    dim = pts.shape[1]
    q, r = np.linalg.qr(rng.normal(size=(dim, dim)))
    q = q * np.sign(np.diag(r))          # well-defined orthogonal factor
    shift = (rng.random(dim) - 0.5) * 200.0
    return pts @ q.T + shift


def adjacency_safe_jitter(rng: np.random.Generator, pts: np.ndarray,
                          r: float) -> np.ndarray:
    """Perturb points without flipping any pairwise at-most-r relation.

    Moving each point by at most m changes any pairwise distance by at
    most 2m, so a jitter bounded by 40% of half the smallest |dist - r|
    margin is safe.  Returns the input unchanged when some pair sits
    exactly at the threshold.
    """
    n = pts.shape[0]
    if n < 2:
        return pts
    diff = pts[:, None, :] - pts[None, :, :]
    dist = np.sqrt((diff**2).sum(axis=-1))
    iu = np.triu_indices(n, 1)
    margin = float(np.min(np.abs(dist[iu] - r)))
    if margin < 1e-9:
        return pts
    step = 0.4 * margin / 2.0
    vec = rng.normal(size=pts.shape)
    norms = np.linalg.norm(vec, axis=1, keepdims=True)
    norms[norms == 0.0] = 1.0
    return pts + vec / norms * (rng.random((n, 1)) * step)


def sample_small_ball(rng: np.random.Generator, dim: int, n_max: int,
                      r: float) -> np.ndarray:
    """Points inside the open ball of radius r/2 about the origin."""
    n = int(rng.integers(1, n_max + 1))
    out = []
    while len(out) < n:
        cand = (rng.random((4 * n, dim)) - 0.5) * r
        keep = cand[np.linalg.norm(cand, axis=1) < 0.49 * r]
        out.extend(keep[: n - len(out)])
    return np.array(out)
