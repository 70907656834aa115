"""Array-based heuristics that scale past the exact-solver caps.

The independence heuristic is a min-degree greedy pass followed by
(1,2)-exchange local search: whenever two non-adjacent outside vertices
conflict only with the same chosen vertex, trading one for two grows the
set.  The result is a certified lower bound; a first-fit clique cover on
the same graph certifies the upper side.
"""

from __future__ import annotations

from collections import defaultdict

import numpy as np

__all__ = ["greedy_swap_independent", "greedy_clique_cover_bool"]


def greedy_swap_independent(adj: np.ndarray, rounds: int = 60) -> np.ndarray:
    """Independent-set mask on a symmetric boolean adjacency matrix."""
    n = adj.shape[0]
    in_set = np.zeros(n, dtype=bool)
    if n == 0:
        return in_set
    alive = np.ones(n, dtype=bool)
    deg = adj.sum(axis=1).astype(np.int64)
    idx = np.arange(n)
    while alive.any():
        cand = idx[alive]
        v = int(cand[np.argmin(deg[cand])])
        in_set[v] = True
        removed = alive & (adj[v] | (idx == v))
        alive &= ~removed
        if removed.any():
            deg = deg - adj[:, removed].sum(axis=1)
    for _ in range(rounds):
        conflicts = adj[:, in_set].sum(axis=1)
        free = (~in_set) & (conflicts == 0)
        if free.any():
            for u in idx[free]:
                if not adj[u, in_set].any():
                    in_set[u] = True
            continue
        tight = (~in_set) & (conflicts == 1)
        if not tight.any():
            break
        tv = idx[tight]
        set_idx = idx[in_set]
        owners = set_idx[np.argmax(adj[np.ix_(tv, set_idx)], axis=1)]
        groups = defaultdict(list)
        for u, o in zip(tv, owners):
            groups[int(o)].append(int(u))
        swapped = False
        for o, lst in groups.items():
            lst = lst[:48]
            pair = None
            for i in range(len(lst)):
                for j in range(i + 1, len(lst)):
                    if not adj[lst[i], lst[j]]:
                        pair = (lst[i], lst[j])
                        break
                if pair:
                    break
            if pair:
                in_set[o] = False
                in_set[pair[0]] = True
                in_set[pair[1]] = True
                swapped = True
                break
        if not swapped:
            break
    return in_set


def greedy_clique_cover_bool(adj: np.ndarray) -> list:
    """First-fit clique cover; returns a list of vertex-index lists."""
    n = adj.shape[0]
    cliques: list[list[int]] = []
    for v in range(n):
        placed = False
        for c in cliques:
            if adj[v, c].all():
                c.append(v)
                placed = True
                break
        if not placed:
            cliques.append([v])
    return cliques
