"""G(X, r): geometric graph on a point set with closed-ball adjacency
(edge iff Euclidean distance <= r), built through a cell grid of side r so
construction stays near-linear at bounded density. Distances are compared
squared to avoid square-root error.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .pointproc import PointSet

__all__ = [
    "GeometricGraph",
    "Cluster",
    "build_graph",
    "components",
    "component_count",
    "isolated_count",
    "boundary_set",
    "cluster_of",
    "edge_list_text",
]


@dataclass(frozen=True)
class Cluster:
    root: int
    members: tuple


class GeometricGraph:
    """Immutable after build; vertex identity is the index into the ordered
    PointSet."""

    __slots__ = ("points", "r", "adjacency", "cell_grid", "_comp_cache")

    def __init__(self, points: PointSet, r: float, adjacency, cell_grid):
        self.points = points
        self.r = float(r)
        self.adjacency = adjacency        # tuple of sorted tuples
        self.cell_grid = cell_grid        # dict cell-index -> vertex indices
        self._comp_cache = None

    @property
    def n(self) -> int:
        return len(self.points)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def edges(self):
        for i, nbrs in enumerate(self.adjacency):
            for j in nbrs:
                if j > i:
                    yield (i, j)

    def edge_count(self) -> int:
        return sum(len(a) for a in self.adjacency) // 2

    def adjacency_masks(self):
        """Closed-neighborhood-free bitmasks (open neighborhoods)."""
        return [sum(1 << j for j in nbrs) for nbrs in self.adjacency]


def build_graph(ps: PointSet, r: float) -> GeometricGraph:
    if not r > 0:
        raise ValueError("r must be positive")
    pts = ps.points
    n = pts.shape[0]
    adjacency = [[] for _ in range(n)]
    grid: dict[tuple, list] = {}
    if n:
        cells = np.floor(pts / r).astype(np.int64)
        for i, c in enumerate(map(tuple, cells)):
            grid.setdefault(c, []).append(i)
        r2 = r * r
        offsets = [off for off in itertools.product((-1, 0, 1), repeat=ps.dim)]
        nonneg = [off for off in offsets if off >= (0,) * ps.dim]
        for c, members in grid.items():
            mem = np.array(members)
            p_mem = pts[mem]
            for off in nonneg:
                if off == (0,) * ps.dim:
                    if len(members) > 1:
                        d2 = _pair_dist2(p_mem)
                        for a, b in zip(*np.nonzero(d2 <= r2)):
                            if a < b:
                                i, j = members[a], members[b]
                                adjacency[i].append(j)
                                adjacency[j].append(i)
                    continue
                other = grid.get(tuple(np.add(c, off)))
                if not other:
                    continue
                oth = np.array(other)
                d2 = _cross_dist2(p_mem, pts[oth])
                for a, b in zip(*np.nonzero(d2 <= r2)):
                    i, j = members[a], other[b]
                    adjacency[i].append(j)
                    adjacency[j].append(i)
    adj = tuple(tuple(sorted(nbrs)) for nbrs in adjacency)
    return GeometricGraph(ps, r, adj, {k: tuple(v) for k, v in grid.items()})


def _pair_dist2(p: np.ndarray) -> np.ndarray:
    diff = p[:, None, :] - p[None, :, :]
    return np.einsum("ijk,ijk->ij", diff, diff)


def _cross_dist2(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    diff = p[:, None, :] - q[None, :, :]
    return np.einsum("ijk,ijk->ij", diff, diff)


def _component_labels(g: GeometricGraph):
    if g._comp_cache is not None:
        return g._comp_cache
    n = g.n
    label = [-1] * n
    order = []
    cur = 0
    for s in range(n):
        if label[s] != -1:
            continue
        stack = [s]
        label[s] = cur
        comp = [s]
        while stack:
            v = stack.pop()
            for u in g.adjacency[v]:
                if label[u] == -1:
                    label[u] = cur
                    comp.append(u)
                    stack.append(u)
        order.append(sorted(comp))
        cur += 1
    g._comp_cache = (label, order)
    return g._comp_cache


def components(g: GeometricGraph) -> list[Cluster]:
    _, comps = _component_labels(g)
    return [Cluster(root=c[0], members=tuple(c)) for c in comps]


def component_count(g: GeometricGraph) -> int:
    return len(_component_labels(g)[1])


def isolated_count(g: GeometricGraph) -> int:
    return sum(1 for nbrs in g.adjacency if not nbrs)


def cluster_of(g: GeometricGraph, v: int) -> Cluster:
    if not 0 <= v < g.n:
        raise ValueError("vertex index out of range")
    label, comps = _component_labels(g)
    members = comps[label[v]]
    return Cluster(root=members[0], members=tuple(members))


def boundary_set(Y: PointSet, Z: PointSet, r: float) -> np.ndarray:
    """Indices into Y of the points within distance r of Z (the boundary set
    that weights the superadditivity defect). Y and Z must be disjoint."""
    if len(Y) == 0 or len(Z) == 0:
        return np.empty(0, dtype=int)
    py, pz = Y.points, Z.points
    if len(Y) * len(Z) <= 4_000_000:
        d2 = _cross_dist2(py, pz)
        if np.any(d2 == 0.0):
            raise ValueError("Y and Z must be disjoint")
        return np.flatnonzero(np.min(d2, axis=1) <= r * r)
    from scipy.spatial import cKDTree

    tree = cKDTree(pz)
    dist, _ = tree.query(py, k=1)
    if np.any(dist == 0.0):
        raise ValueError("Y and Z must be disjoint")
    return np.flatnonzero(dist <= r)


def edge_list_text(g: GeometricGraph) -> str:
    """Edge list export: one '<i> <j>' per line, 0-based."""
    return "".join(f"{i} {j}\n" for i, j in g.edges())
