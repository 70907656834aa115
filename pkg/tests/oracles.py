"""Independent brute-force reference implementations for the test suite.

Everything here is written from the definitions with the dumbest approach
that terminates at test scale (subset loops, permutation loops, fixpoint
elimination), sharing no code or algorithmic shortcuts with the package:
adjacency is rebuilt by pairwise distance loops, game values are computed
from the raw game rules starting at one guard, and tours/matchings/trees
are exhaustively enumerated.
"""

from __future__ import annotations

import math
from itertools import combinations, combinations_with_replacement, \
    permutations

import numpy as np


# ---------------------------------------------------------------------------
# geometry


def brute_adjacency(pts, r):
    """Neighbor sets by the closed-ball rule, via plain squared distances."""
    pts = np.asarray(pts, dtype=float)
    n = pts.shape[0]
    adj = [set() for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            d2 = float(np.sum((pts[i] - pts[j]) ** 2))
            if d2 <= r * r:
                adj[i].add(j)
                adj[j].add(i)
    return adj


def brute_edges(adj):
    return sorted((i, j) for i in range(len(adj)) for j in adj[i] if i < j)


def brute_components(adj):
    n = len(adj)
    seen = [False] * n
    count = 0
    for s in range(n):
        if seen[s]:
            continue
        count += 1
        stack = [s]
        seen[s] = True
        while stack:
            v = stack.pop()
            for u in adj[v]:
                if not seen[u]:
                    seen[u] = True
                    stack.append(u)
    return count


def brute_isolated(adj):
    return sum(1 for a in adj if not a)


def brute_boundary_count(y_pts, z_pts, r):
    """Points of Y within distance r of some point of Z."""
    y = np.asarray(y_pts, dtype=float)
    z = np.asarray(z_pts, dtype=float)
    count = 0
    for p in y:
        for q in z:
            if float(np.sum((p - q) ** 2)) <= r * r:
                count += 1
                break
    return count


# ---------------------------------------------------------------------------
# vertex subset invariants


def brute_alpha(adj):
    n = len(adj)
    best = 0
    for size in range(n, 0, -1):
        for combo in combinations(range(n), size):
            cs = set(combo)
            if all(not (adj[v] & cs) for v in combo):
                return size
    return best


def brute_gamma(adj):
    n = len(adj)
    if n == 0:
        return 0
    for size in range(1, n + 1):
        for combo in combinations(range(n), size):
            covered = set()
            for v in combo:
                covered.add(v)
                covered |= adj[v]
            if len(covered) == n:
                return size
    raise AssertionError("the full vertex set always dominates")


def brute_vc(adj):
    n = len(adj)
    edges = brute_edges(adj)
    if not edges:
        return 0
    for size in range(0, n + 1):
        for combo in combinations(range(n), size):
            cs = set(combo)
            if all(i in cs or j in cs for i, j in edges):
                return size
    raise AssertionError("the full vertex set always covers")


def _is_clique(adj, vs):
    return all(u in adj[v] for v, u in combinations(vs, 2))


def brute_theta(adj):
    """Minimum number of cliques partitioning the vertices (memoized over
    vertex subsets, always peeling a clique through the lowest vertex)."""
    n = len(adj)
    if n == 0:
        return 0
    memo = {0: 0}

    def cliques_through(lowest, pool):
        """All cliques within ``pool`` containing ``lowest`` (as masks)."""
        members = [v for v in range(n) if pool >> v & 1 and v != lowest]
        out = []
        stack = [(1 << lowest, members)]
        while stack:
            mask, rest = stack.pop()
            out.append(mask)
            for idx, v in enumerate(rest):
                if all(u in adj[v] for u in range(n)
                       if (mask >> u & 1) and u != v):
                    stack.append((mask | (1 << v), rest[idx + 1:]))
        return out

    def solve(mask):
        if mask in memo:
            return memo[mask]
        lowest = (mask & -mask).bit_length() - 1
        best = 1 + min(solve(mask & ~c) for c in cliques_through(lowest, mask))
        memo[mask] = best
        return best

    return solve((1 << n) - 1)


def brute_matching(adj):
    edges = brute_edges(adj)

    def rec(start, used):
        best = 0
        for idx in range(start, len(edges)):
            i, j = edges[idx]
            if i in used or j in used:
                continue
            best = max(best, 1 + rec(idx + 1, used | {i, j}))
        return best

    return rec(0, frozenset())


def brute_edge_cover(adj):
    """Fewest edges touching every non-isolated vertex (subset DP)."""
    n = len(adj)
    need = 0
    for v in range(n):
        if adj[v]:
            need |= 1 << v
    memo = {0: 0}

    def solve(mask):
        if mask in memo:
            return memo[mask]
        v = (mask & -mask).bit_length() - 1
        best = min(solve(mask & ~((1 << v) | (1 << u))) + 1 for u in adj[v])
        memo[mask] = best
        return best

    return solve(need)


def _pattern_copies(adj, pattern):
    n = len(adj)
    out = []
    if pattern == "K2":
        out = [frozenset(e) for e in brute_edges(adj)]
    elif pattern == "K3":
        for a, b, c in combinations(range(n), 3):
            if b in adj[a] and c in adj[a] and c in adj[b]:
                out.append(frozenset((a, b, c)))
    elif pattern == "P3":
        for trio in combinations(range(n), 3):
            if any(len(adj[mid] & (set(trio) - {mid})) == 2 for mid in trio):
                out.append(frozenset(trio))
    else:
        raise ValueError(pattern)
    return out


def brute_h_packing(adj, pattern):
    copies = _pattern_copies(adj, pattern)

    def rec(idx, used):
        best = 0
        for k in range(idx, len(copies)):
            if copies[k] & used:
                continue
            best = max(best, 1 + rec(k + 1, used | copies[k]))
        return best

    return rec(0, frozenset())


# ---------------------------------------------------------------------------
# the guard game, straight from the rules, one guard up


def _eternal_family(adj, n, k, configs):
    """Greatest set of placements surviving the attack-defence fixpoint."""
    family = set(configs)
    while True:
        dead = set()
        for cfg in family:
            for attack in range(n):
                if attack in cfg:
                    continue
                answers = [g for g in cfg if attack in adj[g]]
                if not any((cfg - {g}) | {attack} in family for g in answers):
                    dead.add(cfg)
                    break
        if not dead:
            return family
        family -= dead


def brute_eternal(adj):
    n = len(adj)
    if n == 0:
        return 0
    for k in range(1, n + 1):
        configs = [frozenset(c) for c in combinations(range(n), k)]
        if _eternal_family(adj, n, k, configs):
            return k
    raise AssertionError("all guards everywhere always works")


def brute_eternal_multiguard(adj):
    """Same game on multisets of guard positions."""
    n = len(adj)
    if n == 0:
        return 0

    def survive(k):
        family = set()
        for combo in combinations_with_replacement(range(n), k):
            counts = [0] * n
            for v in combo:
                counts[v] += 1
            family.add(tuple(counts))
        while True:
            dead = set()
            for cfg in family:
                for attack in range(n):
                    if cfg[attack]:
                        continue
                    answered = False
                    for g in adj[attack]:
                        if not cfg[g]:
                            continue
                        nxt = list(cfg)
                        nxt[g] -= 1
                        nxt[attack] += 1
                        if tuple(nxt) in family:
                            answered = True
                            break
                    if not answered:
                        dead.add(cfg)
                        break
            if not dead:
                return bool(family)
            family -= dead

    for k in range(1, n + 1):
        if survive(k):
            return k
    raise AssertionError("n guards always work")


# ---------------------------------------------------------------------------
# weighted Euclidean functionals by full enumeration


def _wdist(w, p, q):
    return float(w.on_distances(np.linalg.norm(np.asarray(p) - np.asarray(q))))


def brute_tsp(pts, w):
    pts = np.asarray(pts, dtype=float)
    n = pts.shape[0]
    if n <= 1:
        return 0.0
    if n == 2:
        return 2.0 * _wdist(w, pts[0], pts[1])
    best = math.inf
    for perm in permutations(range(1, n)):
        order = (0,) + perm
        tot = sum(_wdist(w, pts[order[i]], pts[order[(i + 1) % n]])
                  for i in range(n))
        best = min(best, tot)
    return best


def brute_min_matching(pts, w):
    """Min-weight matching covering all points (all but one when odd)."""
    pts = np.asarray(pts, dtype=float)
    n = pts.shape[0]

    def rec(rest):
        if len(rest) <= 1:
            return 0.0
        v = rest[0]
        best = math.inf
        for idx in range(1, len(rest)):
            u = rest[idx]
            tail = rest[1:idx] + rest[idx + 1:]
            best = min(best, _wdist(w, pts[v], pts[u]) + rec(tail))
        return best

    if n % 2 == 0:
        return rec(tuple(range(n)))
    full = tuple(range(n))
    return min(rec(full[:skip] + full[skip + 1:]) for skip in range(n))


def brute_bipartite_matching(pa, pb, w):
    pa, pb = np.asarray(pa, float), np.asarray(pb, float)
    if pa.shape[0] > pb.shape[0]:
        pa, pb = pb, pa
    la, lb = pa.shape[0], pb.shape[0]
    if la == 0:
        return 0.0
    best = math.inf
    for chosen in permutations(range(lb), la):
        tot = sum(_wdist(w, pa[i], pb[j]) for i, j in enumerate(chosen))
        best = min(best, tot)
    return best


def brute_bipartite_tsp(pa, pb, w):
    """Min alternating cycle through two equal-size sides."""
    pa, pb = np.asarray(pa, float), np.asarray(pb, float)
    m = pa.shape[0]
    if m == 0:
        return 0.0
    if m == 1:
        return 2.0 * _wdist(w, pa[0], pb[0])
    best = math.inf
    for aperm in permutations(range(1, m)):
        aseq = (0,) + aperm
        for bperm in permutations(range(m)):
            tot = 0.0
            for i in range(m):
                tot += _wdist(w, pa[aseq[i]], pb[bperm[i]])
                tot += _wdist(w, pb[bperm[i]], pa[aseq[(i + 1) % m]])
            best = min(best, tot)
    return best


def prufer_to_edges(seq, n):
    """Decode a length-(n-2) sequence over {0..n-1} into its labeled tree."""
    degree = [1] * n
    for v in seq:
        degree[v] += 1
    edges = []
    ptr = 0
    leaf = -1
    for v in seq:
        if leaf == -1:
            while degree[ptr] != 1:
                ptr += 1
            leaf = ptr
        edges.append((leaf, v))
        degree[leaf] -= 1
        degree[v] -= 1
        if degree[v] == 1 and v < ptr:
            leaf = v
        else:
            leaf = -1
    last = [v for v in range(n) if degree[v] == 1]
    edges.append((last[0], last[1]))
    return edges


def brute_mst(pts, w):
    """Minimum spanning tree weight by decoding every labeled tree."""
    pts = np.asarray(pts, dtype=float)
    n = pts.shape[0]
    if n <= 1:
        return 0.0
    if n == 2:
        return _wdist(w, pts[0], pts[1])
    best = math.inf
    for seq in np.ndindex(*((n,) * (n - 2))):
        tot = sum(_wdist(w, pts[i], pts[j])
                  for i, j in prufer_to_edges(seq, n))
        best = min(best, tot)
    return best


# ---------------------------------------------------------------------------
# independent Monte Carlo for the isolated-point rate


def mc_isolated_rate(lam, s, reps, seed):
    """Mean fraction of radius-1 isolated points among Poisson(lam) points
    per unit length of [0, s], by direct simulation with numpy's default
    generator (nothing shared with the package's stream layout)."""
    rng = np.random.default_rng(seed)
    vals = []
    for _ in range(reps):
        n = rng.poisson(lam * s)
        xs = np.sort(rng.uniform(0.0, s, size=n))
        if n == 0:
            vals.append(0.0)
            continue
        iso = 0
        for i in range(n):
            left = i > 0 and xs[i] - xs[i - 1] <= 1.0
            right = i + 1 < n and xs[i + 1] - xs[i] <= 1.0
            if not left and not right:
                iso += 1
        vals.append(iso / (lam * s))
    return float(np.mean(vals)), float(np.std(vals, ddof=1) / math.sqrt(reps))
