"""Geometric graph construction checked against plain distance loops."""

from __future__ import annotations

import numpy as np
import pytest

import oracles as O
from conftest import neighbor_sets, random_pointset
from rgg_limits.geograph import (
    boundary_set,
    build_graph,
    cluster_of,
    component_count,
    components,
    edge_list_text,
    isolated_count,
)
from rgg_limits.pointproc import PointSet


@pytest.mark.parametrize("d", [1, 2, 3])
def test_adjacency_matches_distance_loops(rng, d):
    for trial in range(25):
        n = int(rng.integers(0, 40))
        ps = random_pointset(rng, n, d)
        r = float(rng.choice([0.3, 0.7, 1.2, 2.5]))
        g = build_graph(ps, r)
        expect = O.brute_adjacency(ps.points, r)
        assert neighbor_sets(g) == expect
        assert sorted(g.edges()) == O.brute_edges(expect)
        assert g.edge_count() == len(O.brute_edges(expect))


def test_closed_ball_rule_includes_boundary():
    ps = PointSet(1, [[0.0], [1.0], [2.0 + 1e-9]])
    g = build_graph(ps, 1.0)
    assert neighbor_sets(g) == [{1}, {0}, set()]


def test_components_partition_and_count(rng):
    for trial in range(15):
        d = int(rng.integers(1, 4))
        ps = random_pointset(rng, int(rng.integers(1, 35)), d)
        r = float(rng.choice([0.4, 0.9]))
        g = build_graph(ps, r)
        adj = O.brute_adjacency(ps.points, r)
        cs = components(g)
        assert component_count(g) == len(cs) == O.brute_components(adj)
        seen = sorted(v for c in cs for v in c.members)
        assert seen == list(range(len(ps)))
        assert isolated_count(g) == O.brute_isolated(adj)
        for c in cs:
            for v in c.members:
                assert cluster_of(g, v).members == c.members


def test_boundary_set_matches_loops(rng):
    for trial in range(20):
        d = int(rng.integers(1, 4))
        y = random_pointset(rng, int(rng.integers(1, 25)), d)
        z = random_pointset(rng, int(rng.integers(1, 25)), d)
        r = float(rng.choice([0.5, 1.0]))
        idx = boundary_set(y, z, r)
        expect = [i for i in range(len(y))
                  if any(float(np.sum((y.points[i] - q) ** 2)) <= r * r
                         for q in z.points)]
        assert sorted(idx.tolist()) == expect
        assert O.brute_boundary_count(y.points, z.points, r) == len(expect)


def test_boundary_set_empty_inputs():
    a = PointSet(2, np.empty((0, 2)))
    b = PointSet(2, [[0.0, 0.0]])
    assert boundary_set(a, b, 1.0).size == 0
    assert boundary_set(b, a, 1.0).size == 0


def test_boundary_set_rejects_overlap():
    y = PointSet(1, [[0.0], [1.0]])
    z = PointSet(1, [[1.0]])
    with pytest.raises(ValueError):
        boundary_set(y, z, 0.5)


def test_edge_list_text_format():
    ps = PointSet(1, [[0.0], [0.5], [3.0]])
    g = build_graph(ps, 1.0)
    assert edge_list_text(g) == "0 1\n"
    lonely = build_graph(PointSet(1, [[0.0]]), 1.0)
    assert edge_list_text(lonely) == ""


def test_graph_exposes_basic_attributes():
    ps = PointSet(2, [[0.0, 0.0], [0.5, 0.0], [5.0, 5.0]])
    g = build_graph(ps, 1.0)
    assert g.n == 3
    assert g.r == 1.0
    assert g.degree(0) == 1
    assert g.degree(2) == 0
    assert np.array_equal(g.points.points, ps.points)
