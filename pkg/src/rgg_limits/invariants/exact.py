"""Exact and heuristic solvers for independence, domination, clique cover and
vertex cover on geometric graphs.

All exact searches are deterministic: vertices are ordered lexicographically
by coordinates (then index) before solving, so witnesses are reproducible.
Collinear instances (always in d=1) take an exact sweep path that runs in
O(n log n), which is what makes the dense-limit experiments feasible.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from ..geograph import GeometricGraph

__all__ = [
    "SolveResult",
    "BudgetExceeded",
    "independence_number",
    "domination_number",
    "clique_cover_number",
    "vertex_cover_number",
    "check_independent",
    "check_dominating",
    "check_clique_partition",
    "check_vertex_cover",
]

DEFAULT_NODE_BUDGET = 10_000_000


class BudgetExceeded(RuntimeError):
    """Raised when an exact search passes its node budget."""


@dataclass
class SolveResult:
    value: float
    exact: bool
    lower: float
    upper: float
    witness: object = None
    elapsed: float = 0.0

    def __post_init__(self):
        if not (self.lower - 1e-9 <= self.value <= self.upper + 1e-9):
            raise ValueError("SolveResult bounds must bracket the value")

    def to_json_dict(self):
        w = self.witness
        if isinstance(w, np.ndarray):
            w = w.tolist()
        return {"value": self.value, "exact": self.exact, "lower": self.lower,
                "upper": self.upper, "witness": w,
                "elapsed_ms": round(self.elapsed * 1000.0, 3)}


# ---------------------------------------------------------------------------
# shared machinery


def _lex_order(g: GeometricGraph):
    pts = g.points.points
    if g.n == 0:
        return []
    return [int(i) for i in np.lexsort(pts.T[::-1])]


def _masks(g: GeometricGraph, order):
    """Open adjacency bitmasks in the given vertex order."""
    pos = {v: i for i, v in enumerate(order)}
    return [sum(1 << pos[u] for u in g.adjacency[v]) for v in order]


def _bool_adjacency(g: GeometricGraph) -> np.ndarray:
    n = g.n
    out = np.zeros((n, n), dtype=bool)
    for v, nbrs in enumerate(g.adjacency):
        if nbrs:
            out[v, list(nbrs)] = True
    return out


def _collinear_params(g: GeometricGraph):
    """Projection parameters if all points lie on one line, else None."""
    pts = g.points.points
    n = pts.shape[0]
    if n <= 2 or g.points.dim == 1:
        t = pts[:, 0] if g.points.dim >= 1 and n else np.zeros(n)
        if g.points.dim == 1:
            return pts[:, 0]
        if n <= 2:
            d = pts[1] - pts[0] if n == 2 else np.zeros(g.points.dim)
            nrm = np.linalg.norm(d)
            u = d / nrm if nrm > 0 else np.zeros(g.points.dim)
            return pts @ u
        return t
    base = pts[0]
    diffs = pts - base
    norms = np.linalg.norm(diffs, axis=1)
    k = int(np.argmax(norms))
    if norms[k] == 0:
        return None
    u = diffs[k] / norms[k]
    t = diffs @ u
    resid = diffs - t[:, None] * u[None, :]
    scale = max(1.0, float(norms[k]))
    if np.max(np.linalg.norm(resid, axis=1)) > 1e-9 * scale:
        return None
    return t


class _Budget:
    __slots__ = ("left",)

    def __init__(self, n):
        self.left = n

    def spend(self):
        self.left -= 1
        if self.left < 0:
            raise BudgetExceeded("exact-solver node budget exceeded")


# ---------------------------------------------------------------------------
# independence number


def _alpha_exact_masks(adj, n, budget: _Budget):
    if n == 0:
        return 0, 0
    full = (1 << n) - 1
    closed = [adj[i] | (1 << i) for i in range(n)]
    best_size = 0
    best_mask = 0

    def rec(P, size, mask):
        nonlocal best_size, best_mask
        budget.spend()
        if P == 0:
            if size > best_size:
                best_size, best_mask = size, mask
            return
        if size + P.bit_count() <= best_size:
            return
        # degree-based pivoting with low-degree reductions
        min_v = max_v = -1
        min_d = max_d = -1
        Q = P
        while Q:
            v = (Q & -Q).bit_length() - 1
            Q &= Q - 1
            d = (adj[v] & P).bit_count()
            if min_d < 0 or d < min_d:
                min_d, min_v = d, v
            if d > max_d:
                max_d, max_v = d, v
        if min_d <= 1:
            v = min_v  # taking a vertex of degree <= 1 is always optimal
            rec(P & ~closed[v], size + 1, mask | (1 << v))
            return
        v = max_v
        rec(P & ~closed[v], size + 1, mask | (1 << v))
        rec(P & ~(1 << v), size, mask)

    rec(full, 0, 0)
    return best_size, best_mask


def _greedy_independent_masks(adj, n):
    """Min-degree greedy independent set; returns (size, mask)."""
    P = (1 << n) - 1
    mask = 0
    size = 0
    while P:
        best_v, best_d = -1, n + 1
        Q = P
        while Q:
            v = (Q & -Q).bit_length() - 1
            Q &= Q - 1
            d = (adj[v] & P).bit_count()
            if d < best_d:
                best_d, best_v = d, v
        mask |= 1 << best_v
        size += 1
        P &= ~(adj[best_v] | (1 << best_v))
    return size, mask


def _greedy_clique_cover_masks(adj, n):
    """First-fit clique cover; returns list of clique masks."""
    cliques = []
    for v in range(n):
        placed = False
        for i, c in enumerate(cliques):
            if c & ~adj[v] == 0:  # v adjacent to every member
                cliques[i] = c | (1 << v)
                placed = True
                break
        if not placed:
            cliques.append(1 << v)
    return cliques


def _sweep_1d(order, pts, r):
    """Exact alpha and theta witnesses for collinear instances via one sweep.

    Returns (picks, groups): picks are pairwise non-adjacent, groups are
    cliques partitioning the vertex set, len(picks) == len(groups).
    """
    picks = []
    groups = []
    cur = []
    last_pick = None
    for v in order:
        if last_pick is None or np.linalg.norm(pts[v] - pts[last_pick]) > r:
            if cur:
                groups.append(cur)
            cur = [v]
            picks.append(v)
            last_pick = v
        else:
            cur.append(v)
    if cur:
        groups.append(cur)
    return picks, groups


def _gamma_sweep_1d(order, pts, r):
    """Exact minimum dominating set for collinear instances."""
    n = len(order)
    doms = []
    i = 0
    while i < n:
        u = order[i]
        # farthest point within r to the right of u dominates greedily
        j = i
        while j + 1 < n and np.linalg.norm(pts[order[j + 1]] - pts[u]) <= r:
            j += 1
        w = order[j]
        doms.append(w)
        i = j + 1
        while i < n and np.linalg.norm(pts[order[i]] - pts[w]) <= r:
            i += 1
    return doms


def independence_number(g: GeometricGraph, mode: str = "exact",
                        node_budget: int = DEFAULT_NODE_BUDGET) -> SolveResult:
    t0 = time.perf_counter()
    n = g.n
    if n == 0:
        return SolveResult(0, True, 0, 0, witness=[], elapsed=time.perf_counter() - t0)
    t = _collinear_params(g)
    if t is not None and mode == "exact":
        order = [int(i) for i in np.argsort(t, kind="stable")]
        picks, groups = _sweep_1d(order, g.points.points, g.r)
        val = len(picks)
        return SolveResult(val, True, val, val, witness=sorted(picks),
                           elapsed=time.perf_counter() - t0)
    if mode == "exact":
        order = _lex_order(g)
        adj = _masks(g, order)
        size, mask = _alpha_exact_masks(adj, n, _Budget(node_budget))
        wit = sorted(order[i] for i in range(n) if mask >> i & 1)
        return SolveResult(size, True, size, size, witness=wit,
                           elapsed=time.perf_counter() - t0)
    from .heuristics import greedy_swap_independent, greedy_clique_cover_bool
    bool_adj = _bool_adjacency(g)
    in_set = greedy_swap_independent(bool_adj)
    cover = greedy_clique_cover_bool(bool_adj)
    wit = [int(v) for v in np.flatnonzero(in_set)]
    return SolveResult(int(in_set.sum()), False, int(in_set.sum()),
                       len(cover), witness=wit,
                       elapsed=time.perf_counter() - t0)


# ---------------------------------------------------------------------------
# domination number


def _greedy_dominating_masks(closed, n):
    uncovered = (1 << n) - 1
    mask = 0
    while uncovered:
        best_v, best_c = -1, -1
        for v in range(n):
            c = (closed[v] & uncovered).bit_count()
            if c > best_c:
                best_c, best_v = c, v
        mask |= 1 << best_v
        uncovered &= ~closed[best_v]
    return mask


def _two_packing_lower(adj, closed, n):
    """Greedy set of vertices with pairwise disjoint closed neighborhoods;
    its size is a certified lower bound for the domination number."""
    blocked = 0
    count = 0
    for v in range(n):
        if blocked >> v & 1:
            continue
        count += 1
        ball2 = closed[v]
        Q = closed[v]
        while Q:
            u = (Q & -Q).bit_length() - 1
            Q &= Q - 1
            ball2 |= closed[u]
        blocked |= ball2
    return count


def _gamma_exact_masks(adj, n, budget: _Budget):
    if n == 0:
        return 0, 0
    closed = [adj[i] | (1 << i) for i in range(n)]
    g_mask = _greedy_dominating_masks(closed, n)
    best_size = g_mask.bit_count()
    best_mask = g_mask
    max_cover = max(c.bit_count() for c in closed)

    def rec(uncovered, size, mask):
        nonlocal best_size, best_mask
        budget.spend()
        if uncovered == 0:
            if size < best_size:
                best_size, best_mask = size, mask
            return
        lb = -(-uncovered.bit_count() // max_cover)
        if size + lb >= best_size:
            return
        # branch on the uncovered vertex with fewest potential dominators
        pick, pick_opts = -1, None
        Q = uncovered
        while Q:
            u = (Q & -Q).bit_length() - 1
            Q &= Q - 1
            opts = closed[u]
            if pick_opts is None or opts.bit_count() < pick_opts.bit_count():
                pick, pick_opts = u, opts
        doms = []
        Q = pick_opts
        while Q:
            w = (Q & -Q).bit_length() - 1
            Q &= Q - 1
            doms.append(w)
        doms.sort(key=lambda w: -(closed[w] & uncovered).bit_count())
        for w in doms:
            rec(uncovered & ~closed[w], size + 1, mask | (1 << w))

    rec((1 << n) - 1, 0, 0)
    return best_size, best_mask


def domination_number(g: GeometricGraph, mode: str = "exact",
                      node_budget: int = DEFAULT_NODE_BUDGET) -> SolveResult:
    t0 = time.perf_counter()
    n = g.n
    if n == 0:
        return SolveResult(0, True, 0, 0, witness=[], elapsed=time.perf_counter() - t0)
    t = _collinear_params(g)
    if t is not None and mode == "exact":
        order = [int(i) for i in np.argsort(t, kind="stable")]
        doms = _gamma_sweep_1d(order, g.points.points, g.r)
        val = len(doms)
        return SolveResult(val, True, val, val, witness=sorted(doms),
                           elapsed=time.perf_counter() - t0)
    order = _lex_order(g)
    adj = _masks(g, order)
    closed = [adj[i] | (1 << i) for i in range(n)]
    if mode == "exact":
        size, mask = _gamma_exact_masks(adj, n, _Budget(node_budget))
        wit = sorted(order[i] for i in range(n) if mask >> i & 1)
        return SolveResult(size, True, size, size, witness=wit,
                           elapsed=time.perf_counter() - t0)
    mask = _greedy_dominating_masks(closed, n)
    lower = _two_packing_lower(adj, closed, n)
    wit = sorted(order[i] for i in range(n) if mask >> i & 1)
    return SolveResult(mask.bit_count(), False, lower, mask.bit_count(),
                       witness=wit, elapsed=time.perf_counter() - t0)


# ---------------------------------------------------------------------------
# clique cover number


def _maximal_cliques_containing(v, P, adj):
    """Maximal cliques (as masks) of the induced subgraph P that contain v,
    via Bron-Kerbosch with pivoting."""
    out = []

    def extend(R, cand, excl):
        if cand == 0:
            if excl == 0:
                out.append(R)
            return
        # pivot on the vertex adjacent to most candidates
        pivot, best = -1, -1
        Q = cand | excl
        while Q:
            u = (Q & -Q).bit_length() - 1
            Q &= Q - 1
            c = (adj[u] & cand).bit_count()
            if c > best:
                best, pivot = c, u
        branch = cand & ~adj[pivot]
        Q = branch
        while Q:
            u = (Q & -Q).bit_length() - 1
            Q &= Q - 1
            extend(R | (1 << u), cand & adj[u], excl & adj[u])
            cand &= ~(1 << u)
            excl |= 1 << u

    extend(1 << v, adj[v] & P, 0)
    return out


def _theta_exact_masks(adj, n, budget: _Budget):
    if n == 0:
        return 0, []
    best_cover = _greedy_clique_cover_masks(adj, n)
    best_size = len(best_cover)

    def indep_lb(P):
        size = 0
        while P:
            v = (P & -P).bit_length() - 1
            size += 1
            P &= ~(adj[v] | (1 << v))
        return size

    chosen = []

    def rec(P, used):
        nonlocal best_size, best_cover
        budget.spend()
        if P == 0:
            if used < best_size:
                best_size = used
                best_cover = list(chosen)
            return
        if used + indep_lb(P) >= best_size:
            return
        v = (P & -P).bit_length() - 1
        cl = _maximal_cliques_containing(v, P, adj)
        cl.sort(key=lambda c: -c.bit_count())
        for c in cl:
            chosen.append(c)
            rec(P & ~c, used + 1)
            chosen.pop()

    rec((1 << n) - 1, 0)
    return best_size, best_cover


def clique_cover_number(g: GeometricGraph, mode: str = "exact",
                        node_budget: int = DEFAULT_NODE_BUDGET) -> SolveResult:
    t0 = time.perf_counter()
    n = g.n
    if n == 0:
        return SolveResult(0, True, 0, 0, witness=[], elapsed=time.perf_counter() - t0)
    t = _collinear_params(g)
    if t is not None and mode == "exact":
        order = [int(i) for i in np.argsort(t, kind="stable")]
        _picks, groups = _sweep_1d(order, g.points.points, g.r)
        val = len(groups)
        return SolveResult(val, True, val, val,
                           witness=[sorted(c) for c in groups],
                           elapsed=time.perf_counter() - t0)
    order = _lex_order(g)
    adj = _masks(g, order)
    if mode == "exact":
        size, cover = _theta_exact_masks(adj, n, _Budget(node_budget))
        wit = [sorted(order[i] for i in range(n) if c >> i & 1) for c in cover]
        return SolveResult(size, True, size, size, witness=wit,
                           elapsed=time.perf_counter() - t0)
    cover = _greedy_clique_cover_masks(adj, n)
    lower, _ = _greedy_independent_masks(adj, n)
    wit = [sorted(order[i] for i in range(n) if c >> i & 1) for c in cover]
    return SolveResult(len(cover), False, lower, len(cover), witness=wit,
                       elapsed=time.perf_counter() - t0)


# ---------------------------------------------------------------------------
# vertex cover (computed through the complement identity)


def vertex_cover_number(g: GeometricGraph, mode: str = "exact",
                        node_budget: int = DEFAULT_NODE_BUDGET) -> SolveResult:
    t0 = time.perf_counter()
    res = independence_number(g, mode=mode, node_budget=node_budget)
    n = g.n
    indep = set(res.witness if res.witness is not None else [])
    wit = sorted(set(range(n)) - indep)
    if res.exact:
        val = n - res.value
        return SolveResult(val, True, val, val, witness=wit,
                           elapsed=time.perf_counter() - t0)
    # heuristic independence is a lower bound, so n - value upper-bounds VC
    return SolveResult(n - res.value, False, n - res.upper, n - res.value,
                       witness=wit, elapsed=time.perf_counter() - t0)


# ---------------------------------------------------------------------------
# independent witness checkers


def check_independent(g: GeometricGraph, vertices) -> bool:
    vs = list(vertices)
    sset = set(vs)
    if len(sset) != len(vs):
        return False
    return all(not (set(g.adjacency[v]) & sset) for v in vs)


def check_dominating(g: GeometricGraph, vertices) -> bool:
    dom = set(vertices)
    if not dom and g.n:
        return False
    for v in range(g.n):
        if v in dom or dom & set(g.adjacency[v]):
            continue
        return False
    return True


def check_clique_partition(g: GeometricGraph, parts) -> bool:
    seen = set()
    for part in parts:
        ps = list(part)
        if not ps:
            return False
        if seen & set(ps):
            return False
        seen |= set(ps)
        for i, a in enumerate(ps):
            for b in ps[i + 1:]:
                if b not in g.adjacency[a]:
                    return False
    return seen == set(range(g.n))


def check_vertex_cover(g: GeometricGraph, vertices) -> bool:
    cov = set(vertices)
    return all(i in cov or j in cov for i, j in g.edges())
