"""Euclidean optimization functionals over weighted point pairs.

Travelling salesman, minimum-weight (near-)perfect matching, bipartite
variants, and minimum spanning tree.  Exact solvers use dynamic programming
over vertex subsets and are capped (tsp at 18 vertices, matching at 20);
heuristics pair a constructive pass with local exchange improvement and are
certified where a cheap bound exists.  The spanning tree is exact at any
size via a memory-light Prim scan, which is the workhorse for the component
counting identity with the indicator weight.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .weights import WeightFunction

__all__ = ["TourResult", "MatchResult", "TreeResult",
           "tsp", "hilbert_tour", "min_matching", "bipartite_matching",
           "bipartite_tsp", "mst", "tour_weight"]

TSP_EXACT_CAP = 18
MATCHING_EXACT_CAP = 20


@dataclass
class TourResult:
    order: list
    weight: float
    exact: bool
    elapsed: float = 0.0


@dataclass
class MatchResult:
    pairs: list
    weight: float
    exact: bool
    lower: float
    unmatched: list = field(default_factory=list)
    elapsed: float = 0.0


@dataclass
class TreeResult:
    edges: list
    weight: float
    exact: bool
    elapsed: float = 0.0


def _points(arr) -> np.ndarray:
    pts = np.asarray(getattr(arr, "points", arr), dtype=float)
    if pts.ndim != 2:
        raise ValueError("expected an (n, d) point array")
    return pts


def tour_weight(pts, w: WeightFunction, order) -> float:
    pts = _points(pts)
    order = list(order)
    n = len(order)
    if n <= 1:
        return 0.0
    seq = pts[order]
    d = np.linalg.norm(seq - np.roll(seq, -1, axis=0), axis=1)
    return float(np.sum(w.on_distances(d)))


# ---------------------------------------------------------------------------
# travelling salesman


def _held_karp(D: np.ndarray):
    """Optimal cycle through all rows of the cost matrix; returns
    (order, weight).  A two-point cycle uses its edge twice."""
    n = D.shape[0]
    full = 1 << n
    dp = np.full((full, n), np.inf)
    parent = np.full((full, n), -1, dtype=np.int8)
    dp[1, 0] = 0.0
    for S in range(3, full, 2):  # subsets containing vertex 0
        m = S & ~1
        while m:
            j = (m & -m).bit_length() - 1
            m &= m - 1
            prev = S ^ (1 << j)
            vals = dp[prev] + D[:, j]
            k = int(np.argmin(vals))
            if vals[k] < dp[S, j]:
                dp[S, j] = vals[k]
                parent[S, j] = k
    if n == 1:
        return [0], 0.0
    closing = dp[full - 1] + D[:, 0]
    closing[0] = np.inf
    j = int(np.argmin(closing))
    weight = float(closing[j])
    order = []
    S = full - 1
    while j != -1:
        order.append(j)
        pj = int(parent[S, j])
        S ^= 1 << j
        j = pj
    order.reverse()
    return order, weight


def _nearest_neighbor_order(pts, w, start=0, sides=None):
    n = pts.shape[0]
    visited = np.zeros(n, dtype=bool)
    order = [start]
    visited[start] = True
    cur = start
    for _ in range(n - 1):
        d = np.linalg.norm(pts - pts[cur], axis=1)
        cost = w.on_distances(d)
        cost[visited] = np.inf
        if sides is not None:
            cost[sides == sides[cur]] = np.inf
        nxt = int(np.argmin(cost))
        order.append(nxt)
        visited[nxt] = True
        cur = nxt
    return order


def _two_opt(pts, w, order, sides=None, max_passes=12):
    """In-place segment-reversal improvement.  With ``sides`` given, only
    parity-preserving moves are tried so alternating tours stay alternating."""
    n = len(order)
    if n < 4:
        return order
    order = list(order)
    for _ in range(max_passes):
        improved = False
        for i in range(n - 2):
            a, b = order[i], order[i + 1]
            k_lo = i + 2
            k_hi = n - 1 if i > 0 else n - 2
            if k_hi < k_lo:
                continue
            ks = np.arange(k_lo, k_hi + 1)
            if sides is not None:
                ks = ks[(ks - i) % 2 == 1]
                if ks.size == 0:
                    continue
            idx = np.asarray(order)
            c = idx[ks]
            dnext = idx[(ks + 1) % n]
            w_ab = w.on_distances(np.array([np.linalg.norm(pts[a] - pts[b])]))[0]
            w_cd = w.on_distances(np.linalg.norm(pts[c] - pts[dnext], axis=1))
            w_ac = w.on_distances(np.linalg.norm(pts[c] - pts[a], axis=1))
            w_bd = w.on_distances(np.linalg.norm(pts[dnext] - pts[b], axis=1))
            gain = (w_ab + w_cd) - (w_ac + w_bd)
            t = int(np.argmax(gain))
            if gain[t] > 1e-12:
                k = int(ks[t])
                order[i + 1:k + 1] = reversed(order[i + 1:k + 1])
                improved = True
        if not improved:
            break
    return order


def tsp(points, w: WeightFunction, mode: str = "exact",
        exact_cap: int = TSP_EXACT_CAP) -> TourResult:
    """Minimum-weight cycle through all points."""
    t0 = time.perf_counter()
    pts = _points(points)
    n = pts.shape[0]
    if n == 0:
        return TourResult([], 0.0, True, time.perf_counter() - t0)
    if n == 1:
        return TourResult([0], 0.0, True, time.perf_counter() - t0)
    if mode == "exact":
        if n > exact_cap:
            raise ValueError(f"exact tour solver capped at {exact_cap} points "
                             f"(got {n}); use heuristic mode")
        D = w.pairwise(pts)
        np.fill_diagonal(D, 0.0)
        order, weight = _held_karp(D)
        return TourResult(order, weight, True, time.perf_counter() - t0)
    order = _nearest_neighbor_order(pts, w)
    order = _two_opt(pts, w, order)
    return TourResult(order, tour_weight(pts, w, order), False,
                      time.perf_counter() - t0)


# ---------------------------------------------------------------------------
# space-filling-curve tour


def _hilbert_keys(coords: np.ndarray, bits: int) -> np.ndarray:
    """Hilbert curve index per row for integer coordinates in [0, 2**bits)."""
    n, dim = coords.shape
    X = coords.astype(np.uint64).copy()
    one = np.uint64(1)
    M = one << np.uint64(bits - 1)
    Q = int(M)
    while Q > 1:
        P = np.uint64(Q - 1)
        Qu = np.uint64(Q)
        for i in range(dim):
            hit = (X[:, i] & Qu) != 0
            X[hit, 0] ^= P
            t = (X[~hit, 0] ^ X[~hit, i]) & P
            X[~hit, 0] ^= t
            X[~hit, i] ^= t
        Q >>= 1
    for i in range(1, dim):
        X[:, i] ^= X[:, i - 1]
    t = np.zeros(n, dtype=np.uint64)
    Q = int(M)
    while Q > 1:
        Qu = np.uint64(Q)
        hit = (X[:, dim - 1] & Qu) != 0
        t[hit] ^= np.uint64(Q - 1)
        Q >>= 1
    X ^= t[:, None]
    key = np.zeros(n, dtype=np.uint64)
    for b in range(bits - 1, -1, -1):
        for i in range(dim):
            key = (key << one) | ((X[:, i] >> np.uint64(b)) & one)
    return key


def hilbert_tour(points, w: WeightFunction, bits: int = 16,
                 improve: bool = True) -> TourResult:
    """Tour by sorting along a Hilbert curve (dimension at most 3), with an
    optional exchange-improvement pass on moderate sizes."""
    t0 = time.perf_counter()
    pts = _points(points)
    n, dim = pts.shape
    if dim > 3:
        raise ValueError("space-filling tour supports dimension <= 3")
    if not 1 <= bits <= 20:
        raise ValueError("bits must be in [1, 20]")
    if n <= 1:
        return TourResult(list(range(n)), 0.0, True, time.perf_counter() - t0)
    if dim == 1:
        order = [int(v) for v in np.argsort(pts[:, 0], kind="stable")]
    else:
        lo = pts.min(axis=0)
        span = pts.max(axis=0) - lo
        span[span == 0] = 1.0
        scale = (2 ** bits - 1) / span
        ints = np.floor((pts - lo) * scale).astype(np.uint64)
        keys = _hilbert_keys(ints, bits)
        order = [int(v) for v in np.lexsort((np.arange(n), keys))]
    if improve and 4 <= n <= 3000:
        order = _two_opt(pts, w, order, max_passes=6)
    return TourResult(order, tour_weight(pts, w, order), n <= 3,
                      time.perf_counter() - t0)


# ---------------------------------------------------------------------------
# minimum-weight matching


def _matching_dp(D: np.ndarray):
    """Min-weight near-perfect matching by subset DP; odd sizes leave the
    cheapest-to-exclude vertex unmatched."""
    n = D.shape[0]
    if n == 0:
        return [], 0.0, []
    full = 1 << n
    INF = math.inf
    dp = [INF] * full
    choice = [0] * full
    dp[0] = 0.0
    Drows = [list(map(float, D[i])) for i in range(n)]
    for S in range(1, full):
        pc = S.bit_count()
        if pc & 1:
            continue
        i = (S & -S).bit_length() - 1
        rest = S ^ (1 << i)
        best = INF
        bestj = -1
        row = Drows[i]
        m = rest
        while m:
            j = (m & -m).bit_length() - 1
            m &= m - 1
            v = dp[S ^ (1 << i) ^ (1 << j)] + row[j]
            if v < best:
                best = v
                bestj = j
        dp[S] = best
        choice[S] = bestj
    fullmask = full - 1
    if n % 2 == 0:
        S, excl = fullmask, []
        weight = dp[fullmask]
    else:
        cands = [(dp[fullmask ^ (1 << v)], v) for v in range(n)]
        weight, v = min(cands)
        S, excl = fullmask ^ (1 << v), [v]
    pairs = []
    while S:
        i = (S & -S).bit_length() - 1
        j = choice[S]
        pairs.append((i, j))
        S ^= (1 << i) | (1 << j)
    return sorted(pairs), float(weight), excl


def _greedy_matching(D: np.ndarray):
    n = D.shape[0]
    C = D.copy()
    np.fill_diagonal(C, np.inf)
    pairs = []
    for _ in range(n // 2):
        k = int(np.argmin(C))
        i, j = divmod(k, n)
        pairs.append((min(i, j), max(i, j)))
        C[i, :] = C[:, i] = C[j, :] = C[:, j] = np.inf
    matched = {v for p in pairs for v in p}
    return pairs, [v for v in range(n) if v not in matched]


def _improve_matching(D: np.ndarray, pairs, passes: int = 8):
    pairs = [tuple(p) for p in pairs]
    for _ in range(passes):
        improved = False
        for x in range(len(pairs)):
            for y in range(x + 1, len(pairs)):
                a, b = pairs[x]
                c, d = pairs[y]
                cur = D[a, b] + D[c, d]
                alt1 = D[a, c] + D[b, d]
                alt2 = D[a, d] + D[b, c]
                if alt1 < cur - 1e-12 and alt1 <= alt2:
                    pairs[x], pairs[y] = (min(a, c), max(a, c)), (min(b, d), max(b, d))
                    improved = True
                elif alt2 < cur - 1e-12:
                    pairs[x], pairs[y] = (min(a, d), max(a, d)), (min(b, c), max(b, c))
                    improved = True
        if not improved:
            break
    return pairs


def min_matching(points, w: WeightFunction, mode: str = "exact",
                 exact_cap: int = MATCHING_EXACT_CAP) -> MatchResult:
    """Minimum-weight matching covering all points (all but one when odd)."""
    t0 = time.perf_counter()
    pts = _points(points)
    n = pts.shape[0]
    if n <= 1:
        return MatchResult([], 0.0, True, 0.0, unmatched=list(range(n)),
                           elapsed=time.perf_counter() - t0)
    D = w.pairwise(pts)
    np.fill_diagonal(D, np.inf)
    mins = np.min(D, axis=1)
    if n % 2 == 0:
        lower = float(np.sum(mins) / 2.0)
    else:
        lower = float((np.sum(mins) - np.max(mins)) / 2.0)
    if mode == "exact":
        if n > exact_cap:
            raise ValueError(f"exact matching capped at {exact_cap} points "
                             f"(got {n}); use heuristic mode")
        pairs, weight, excl = _matching_dp(np.where(np.isfinite(D), D, np.inf))
        return MatchResult(pairs, weight, True, min(lower, weight),
                           unmatched=excl, elapsed=time.perf_counter() - t0)
    pairs, excl = _greedy_matching(D)
    pairs = _improve_matching(D, pairs)
    weight = float(sum(D[i, j] for i, j in pairs))
    return MatchResult(sorted(pairs), weight, False, lower, unmatched=excl,
                       elapsed=time.perf_counter() - t0)


def bipartite_matching(points_a, points_b, w: WeightFunction) -> MatchResult:
    """Min-weight matching across two sides, saturating the smaller side."""
    t0 = time.perf_counter()
    pa, pb = _points(points_a), _points(points_b)
    if pa.shape[0] == 0 or pb.shape[0] == 0:
        un = [("A", i) for i in range(pa.shape[0])] + \
             [("B", j) for j in range(pb.shape[0])]
        return MatchResult([], 0.0, True, 0.0, unmatched=un,
                           elapsed=time.perf_counter() - t0)
    from scipy.optimize import linear_sum_assignment

    C = w.pairwise(pa, pb)
    rows, cols = linear_sum_assignment(C)
    weight = float(C[rows, cols].sum())
    pairs = sorted((int(i), int(j)) for i, j in zip(rows, cols))
    un = [("A", i) for i in range(pa.shape[0]) if i not in set(rows)] + \
         [("B", j) for j in range(pb.shape[0]) if j not in set(cols)]
    return MatchResult(pairs, weight, True, weight, unmatched=un,
                       elapsed=time.perf_counter() - t0)


def bipartite_tsp(points_a, points_b, w: WeightFunction,
                  mode: str = "exact", exact_cap: int = TSP_EXACT_CAP) -> TourResult:
    """Minimum-weight alternating cycle through two equal-size sides.

    Vertices ``0 .. m-1`` are side A, ``m .. 2m-1`` side B in the returned
    order."""
    t0 = time.perf_counter()
    pa, pb = _points(points_a), _points(points_b)
    m = pa.shape[0]
    if pb.shape[0] != m:
        raise ValueError("alternating tour needs equally many points per side")
    if m == 0:
        return TourResult([], 0.0, True, time.perf_counter() - t0)
    pts = np.vstack([pa, pb])
    sides = np.array([0] * m + [1] * m)
    n = 2 * m
    if m == 1:
        wgt = 2.0 * float(w.pairwise(pa, pb)[0, 0])
        return TourResult([0, 1], wgt, True, time.perf_counter() - t0)
    if mode == "exact":
        if n > exact_cap:
            raise ValueError(f"exact alternating tour capped at {exact_cap} "
                             f"points (got {n}); use heuristic mode")
        D = w.pairwise(pts)
        np.fill_diagonal(D, 0.0)
        D[np.equal.outer(sides, sides)] = np.inf
        np.fill_diagonal(D, 0.0)
        order, weight = _held_karp(D)
        return TourResult(order, weight, True, time.perf_counter() - t0)
    order = _nearest_neighbor_order(pts, w, sides=sides)
    order = _two_opt(pts, w, order, sides=sides)
    return TourResult(order, tour_weight(pts, w, order), False,
                      time.perf_counter() - t0)


# ---------------------------------------------------------------------------
# minimum spanning tree


def mst(points, w: WeightFunction) -> TreeResult:
    """Exact minimum spanning tree under the weighted distance (Prim)."""
    t0 = time.perf_counter()
    pts = _points(points)
    n = pts.shape[0]
    if n <= 1:
        return TreeResult([], 0.0, True, time.perf_counter() - t0)
    in_tree = np.zeros(n, dtype=bool)
    best = np.full(n, np.inf)
    best_from = np.zeros(n, dtype=np.int64)
    in_tree[0] = True
    d0 = np.linalg.norm(pts - pts[0], axis=1)
    best = w.on_distances(d0).astype(float)
    best[0] = np.inf
    edges = []
    total = 0.0
    for _ in range(n - 1):
        masked = np.where(in_tree, np.inf, best)
        v = int(np.argmin(masked))
        total += float(masked[v])
        edges.append((int(min(best_from[v], v)), int(max(best_from[v], v))))
        in_tree[v] = True
        dv = np.linalg.norm(pts - pts[v], axis=1)
        cand = w.on_distances(dv)
        upd = cand < best
        best_from[upd] = v
        best = np.where(upd, cand, best)
        best[v] = np.inf
    return TreeResult(sorted(edges), total, True, time.perf_counter() - t0)
