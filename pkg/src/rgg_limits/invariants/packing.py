"""Matching, small-subgraph packing, and edge cover.

Maximum matching uses an augmenting-path search with blossom contraction,
so it is exact at any size.  Packings of three-vertex patterns (triangles
and two-edge paths) are solved by branch-and-bound over candidate vertex
sets, which is exact at the instance sizes the experiments use.  The edge
cover count is evaluated through its exchange identity with matching and
isolated vertices, and the witness is reconstructed explicitly.
"""

from __future__ import annotations

import time
from collections import deque

from ..geograph import GeometricGraph
from .exact import SolveResult, _Budget, DEFAULT_NODE_BUDGET

__all__ = ["max_cardinality_matching", "h_packing_number",
           "edge_cover_number", "check_packing", "check_edge_cover",
           "PATTERNS"]

PATTERNS = ("K2", "K3", "P3")


def max_cardinality_matching(adj, n):
    """Maximum matching on a general graph; ``adj`` is a list of neighbor
    lists.  Returns ``match`` with ``match[v]`` the partner of v or -1."""
    match = [-1] * n

    def augment(root):
        used = [False] * n
        p = [-1] * n
        base = list(range(n))
        used[root] = True
        q = deque([root])

        def lca(a, b):
            seen = [False] * n
            while True:
                a = base[a]
                seen[a] = True
                if match[a] == -1:
                    break
                a = p[match[a]]
            while True:
                b = base[b]
                if seen[b]:
                    return b
                b = p[match[b]]

        def mark_path(v, b, child, in_blossom):
            while base[v] != b:
                in_blossom[base[v]] = True
                in_blossom[base[match[v]]] = True
                p[v] = child
                child = match[v]
                v = p[match[v]]

        while q:
            v = q.popleft()
            for to in adj[v]:
                if base[v] == base[to] or match[v] == to:
                    continue
                if to == root or (match[to] != -1 and p[match[to]] != -1):
                    # odd cycle: contract the blossom
                    curbase = lca(v, to)
                    in_blossom = [False] * n
                    mark_path(v, curbase, to, in_blossom)
                    mark_path(to, curbase, v, in_blossom)
                    for i in range(n):
                        if in_blossom[base[i]]:
                            base[i] = curbase
                            if not used[i]:
                                used[i] = True
                                q.append(i)
                elif p[to] == -1:
                    p[to] = v
                    if match[to] == -1:
                        u = to
                        while u != -1:
                            pv = p[u]
                            ppv = match[pv]
                            match[u] = pv
                            match[pv] = u
                            u = ppv
                        return True
                    used[match[to]] = True
                    q.append(match[to])
        return False

    for v in range(n):
        if match[v] == -1:
            augment(v)
    return match


def _candidate_sets(g: GeometricGraph, pattern: str):
    """Vertex sets (as bitmasks) that carry a copy of the pattern."""
    n = g.n
    masks = g.adjacency_masks()
    cands = []
    if pattern == "K2":
        for i, j in g.edges():
            cands.append((1 << i) | (1 << j))
    elif pattern == "K3":
        for i, j in g.edges():
            common = masks[i] & masks[j] & ~((1 << (j + 1)) - 1)
            while common:
                k = (common & -common).bit_length() - 1
                common &= common - 1
                cands.append((1 << i) | (1 << j) | (1 << k))
    elif pattern == "P3":
        seen = set()
        for b in range(n):
            nb = g.adjacency[b]
            for x in range(len(nb)):
                for y in range(x + 1, len(nb)):
                    m = (1 << nb[x]) | (1 << b) | (1 << nb[y])
                    if m not in seen:
                        seen.add(m)
                        cands.append(m)
        cands.sort()
    else:
        raise ValueError(f"unsupported pattern {pattern!r}; "
                         f"expected one of {PATTERNS}")
    return cands


def _max_set_packing(cands, n, h, budget: _Budget):
    """Maximum number of pairwise disjoint candidate sets; returns
    (count, list of chosen masks)."""
    by_vertex = [[] for _ in range(n)]
    for c in cands:
        m = c
        while m:
            v = (m & -m).bit_length() - 1
            m &= m - 1
            by_vertex[v].append(c)
    best_count = 0
    best_sets = []
    chosen = []
    full = (1 << n) - 1

    def rec(used, count):
        nonlocal best_count, best_sets
        budget.spend()
        free = full & ~used
        if count + free.bit_count() // h <= best_count:
            return
        v, options = -1, None
        F = free
        while F:
            u = (F & -F).bit_length() - 1
            F &= F - 1
            opts = [c for c in by_vertex[u] if not (c & used)]
            if opts:
                v, options = u, opts
                break
        if v == -1:
            if count > best_count:
                best_count = count
                best_sets = list(chosen)
            return
        for c in options:
            chosen.append(c)
            rec(used | c, count + 1)
            chosen.pop()
        rec(used | (1 << v), count)

    rec(0, 0)
    return best_count, best_sets


def _greedy_set_packing(cands, n):
    used = 0
    out = []
    for c in sorted(cands):
        if not (c & used):
            out.append(c)
            used |= c
    return out


def _mask_to_tuple(m):
    out = []
    while m:
        v = (m & -m).bit_length() - 1
        m &= m - 1
        out.append(v)
    return tuple(out)


def h_packing_number(g: GeometricGraph, pattern: str = "K2",
                     mode: str = "exact",
                     node_budget: int = DEFAULT_NODE_BUDGET) -> SolveResult:
    """Maximum number of vertex-disjoint copies of the pattern."""
    t0 = time.perf_counter()
    if pattern not in PATTERNS:
        raise ValueError(f"unsupported pattern {pattern!r}; "
                         f"expected one of {PATTERNS}")
    n = g.n
    if n == 0:
        return SolveResult(0, True, 0, 0, witness=[], elapsed=time.perf_counter() - t0)
    if pattern == "K2" and mode == "exact":
        match = max_cardinality_matching([list(a) for a in g.adjacency], n)
        pairs = sorted((v, match[v]) for v in range(n) if match[v] > v)
        val = len(pairs)
        return SolveResult(val, True, val, val, witness=pairs,
                           elapsed=time.perf_counter() - t0)
    h = 2 if pattern == "K2" else 3
    cands = _candidate_sets(g, pattern)
    if mode == "exact":
        val, sets = _max_set_packing(cands, n, h, _Budget(node_budget))
        wit = sorted(_mask_to_tuple(m) for m in sets)
        return SolveResult(val, True, val, val, witness=wit,
                           elapsed=time.perf_counter() - t0)
    sets = _greedy_set_packing(cands, n)
    wit = sorted(_mask_to_tuple(m) for m in sets)
    return SolveResult(len(sets), False, len(sets), n // h, witness=wit,
                       elapsed=time.perf_counter() - t0)


def edge_cover_number(g: GeometricGraph) -> SolveResult:
    """Fewest edges touching every non-isolated vertex.  Isolated vertices
    cannot be covered and are excluded by convention, so the count satisfies
    value + matching + isolated == n on every instance."""
    t0 = time.perf_counter()
    n = g.n
    if n == 0:
        return SolveResult(0, True, 0, 0, witness=[], elapsed=time.perf_counter() - t0)
    match = max_cardinality_matching([list(a) for a in g.adjacency], n)
    edges = [(v, match[v]) for v in range(n) if match[v] > v]
    for v in range(n):
        if match[v] == -1 and g.adjacency[v]:
            edges.append((v, g.adjacency[v][0]))
    val = len(edges)
    return SolveResult(val, True, val, val,
                       witness=sorted(tuple(sorted(e)) for e in edges),
                       elapsed=time.perf_counter() - t0)


def check_packing(g: GeometricGraph, pattern: str, copies) -> bool:
    """Each copy must carry the pattern and copies must be vertex-disjoint."""
    seen = set()
    for copy in copies:
        vs = tuple(copy)
        if set(vs) & seen or len(set(vs)) != len(vs):
            return False
        seen |= set(vs)
        if pattern == "K2":
            if len(vs) != 2 or vs[1] not in g.adjacency[vs[0]]:
                return False
        elif pattern == "K3":
            if len(vs) != 3:
                return False
            a, b, c = vs
            if not (b in g.adjacency[a] and c in g.adjacency[a]
                    and c in g.adjacency[b]):
                return False
        elif pattern == "P3":
            if len(vs) != 3:
                return False
            ok = False
            for center in range(3):
                others = [vs[i] for i in range(3) if i != center]
                if all(o in g.adjacency[vs[center]] for o in others):
                    ok = True
                    break
            if not ok:
                return False
        else:
            return False
    return True


def check_edge_cover(g: GeometricGraph, edges) -> bool:
    covered = set()
    for i, j in edges:
        if j not in g.adjacency[i]:
            return False
        covered |= {i, j}
    need = {v for v in range(g.n) if g.adjacency[v]}
    return need <= covered
