"""Eternal domination solvers.

A guard placement is *safe* when every attack on an unguarded vertex can be
answered by sliding one adjacent guard onto it so that the resulting
placement is safe again.  The value is the least number of guards admitting
a safe placement.  It decomposes additively over connected components, and
per component it is sandwiched between the independence number and the
clique cover number, which both brackets the search and resolves it for free
whenever the two agree (always the case for interval-type instances).

Placements are vertex subsets in the primary model, multisets (several
guards may share a vertex) in the multiguard variant; the two values agree,
which the property harness exercises empirically.
"""

from __future__ import annotations

import time
from itertools import combinations, combinations_with_replacement

from ..geograph import GeometricGraph, components
from .exact import (SolveResult, _alpha_exact_masks, _theta_exact_masks,
                    _Budget, DEFAULT_NODE_BUDGET)

__all__ = ["eternal_domination_number", "eternal_domination_multiguard",
           "check_safe_family"]

DEFAULT_COMPONENT_CAP = 16


def _safe_family(adj, n, k):
    """Greatest fixpoint of the defence game with k guards on an n-vertex
    graph given by open adjacency masks.  Returns the set of safe placements
    (as bitmasks), possibly empty."""
    closed = [adj[i] | (1 << i) for i in range(n)]
    full = (1 << n) - 1
    family = set()
    for combo in combinations(range(n), k):
        D = 0
        dominated = 0
        for v in combo:
            D |= 1 << v
            dominated |= closed[v]
        if dominated == full:
            family.add(D)
    while True:
        dead = []
        for D in family:
            attacks = full & ~D
            ok = True
            A = attacks
            while A:
                v = (A & -A).bit_length() - 1
                A &= A - 1
                movers = adj[v] & D
                answered = False
                M = movers
                while M:
                    g = (M & -M).bit_length() - 1
                    M &= M - 1
                    if (D ^ (1 << g)) | (1 << v) in family:
                        answered = True
                        break
                if not answered:
                    ok = False
                    break
            if not ok:
                dead.append(D)
        if not dead:
            return family
        family.difference_update(dead)
        if not family:
            return family


def _component_eternal(adj, n, node_budget):
    """Eternal domination number of one connected component."""
    budget = _Budget(node_budget)
    alpha, _ = _alpha_exact_masks(adj, n, budget)
    theta, _ = _theta_exact_masks(adj, n, budget)
    if alpha == theta:
        return alpha, None
    for k in range(alpha, theta + 1):
        family = _safe_family(adj, n, k)
        if family:
            return k, family
    raise RuntimeError(
        "eternal domination search exhausted its bracket; this indicates a "
        "solver bug since the clique cover count always suffices")


def eternal_domination_number(g: GeometricGraph, mode: str = "exact",
                              component_cap: int = DEFAULT_COMPONENT_CAP,
                              node_budget: int = DEFAULT_NODE_BUDGET) -> SolveResult:
    """Least number of guards defending the whole graph forever.

    In exact mode every component must have at most ``component_cap``
    vertices; larger instances return a bounds-only heuristic result when
    ``mode == 'heuristic'`` and raise otherwise.
    """
    t0 = time.perf_counter()
    if g.n == 0:
        return SolveResult(0, True, 0, 0, witness=[], elapsed=time.perf_counter() - t0)
    comps = components(g)
    big = max(len(c.members) for c in comps)
    if mode != "exact" or big > component_cap:
        if mode == "exact":
            raise ValueError(
                f"component of size {big} exceeds the eternal-domination cap "
                f"{component_cap}; use heuristic mode for bounds")
        from .exact import independence_number, clique_cover_number
        lo = independence_number(g, mode="exact", node_budget=node_budget)
        hi = clique_cover_number(g, mode="exact", node_budget=node_budget)
        return SolveResult(hi.value, False, lo.value, hi.value, witness=None,
                           elapsed=time.perf_counter() - t0)
    total = 0
    witness = []
    for comp in comps:
        members = list(comp.members)
        sub = _induced_masks(g, members)
        k, family = _component_eternal(sub, len(members), node_budget)
        total += k
        if family:
            D = min(family)
            witness.extend(sorted(members[i] for i in range(len(members))
                                  if D >> i & 1))
        else:  # bracket was tight, any maximum independent set works
            a, mask = _alpha_exact_masks(sub, len(members), _Budget(node_budget))
            witness.extend(sorted(members[i] for i in range(len(members))
                                  if mask >> i & 1))
    return SolveResult(total, True, total, total, witness=sorted(witness),
                       elapsed=time.perf_counter() - t0)


def _induced_masks(g: GeometricGraph, members):
    pos = {v: i for i, v in enumerate(members)}
    out = []
    for v in members:
        m = 0
        for u in g.adjacency[v]:
            if u in pos:
                m |= 1 << pos[u]
        out.append(m)
    return out


# ---------------------------------------------------------------------------
# multiguard variant (placements are multisets)


def _safe_family_multi(adj, n, k):
    closed = [adj[i] | (1 << i) for i in range(n)]
    full = (1 << n) - 1
    family = set()
    for combo in combinations_with_replacement(range(n), k):
        counts = [0] * n
        support = 0
        dominated = 0
        for v in combo:
            counts[v] += 1
            support |= 1 << v
            dominated |= closed[v]
        if dominated == full:
            family.add(tuple(counts))
    while True:
        dead = []
        for D in family:
            ok = True
            for v in range(n):
                if D[v]:
                    continue
                answered = False
                M = adj[v]
                while M:
                    gv = (M & -M).bit_length() - 1
                    M &= M - 1
                    if D[gv] == 0:
                        continue
                    nxt = list(D)
                    nxt[gv] -= 1
                    nxt[v] += 1
                    if tuple(nxt) in family:
                        answered = True
                        break
                if not answered:
                    ok = False
                    break
            if not ok:
                dead.append(D)
        if not dead:
            return family
        family.difference_update(dead)
        if not family:
            return family


def eternal_domination_multiguard(g: GeometricGraph,
                                  component_cap: int = 12,
                                  node_budget: int = DEFAULT_NODE_BUDGET) -> SolveResult:
    """Multiset variant: guards may stack on a vertex.  The value coincides
    with the set variant; this solver searches independently (no bracket by
    the set solver) so that the agreement is a genuine cross-check."""
    t0 = time.perf_counter()
    if g.n == 0:
        return SolveResult(0, True, 0, 0, witness=[], elapsed=time.perf_counter() - t0)
    comps = components(g)
    big = max(len(c.members) for c in comps)
    if big > component_cap:
        raise ValueError(
            f"component of size {big} exceeds the multiguard cap {component_cap}")
    total = 0
    witness = []
    for comp in comps:
        members = list(comp.members)
        sub = _induced_masks(g, members)
        m = len(members)
        found = None
        for k in range(1, m + 1):
            family = _safe_family_multi(sub, m, k)
            if family:
                found = (k, min(family))
                break
        if found is None:
            raise RuntimeError("multiguard search failed on a component")
        k, counts = found
        total += k
        witness.extend((members[i], c) for i, c in enumerate(counts) if c)
    return SolveResult(total, True, total, total, witness=sorted(witness),
                       elapsed=time.perf_counter() - t0)


def check_safe_family(adj_masks, n, family) -> bool:
    """Verify that a nonempty set of placements is closed under defence."""
    if not family:
        return False
    closed = [adj_masks[i] | (1 << i) for i in range(n)]
    full = (1 << n) - 1
    for D in family:
        dominated = 0
        Q = D
        while Q:
            v = (Q & -Q).bit_length() - 1
            Q &= Q - 1
            dominated |= closed[v]
        if dominated != full:
            return False
        A = full & ~D
        while A:
            v = (A & -A).bit_length() - 1
            A &= A - 1
            M = adj_masks[v] & D
            good = False
            while M:
                gv = (M & -M).bit_length() - 1
                M &= M - 1
                if (D ^ (1 << gv)) | (1 << v) in family:
                    good = True
                    break
            if not good:
                return False
    return True
