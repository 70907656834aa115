"""Shared helpers for the test suite."""

from __future__ import annotations

import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))


@pytest.fixture
def rng():
    return np.random.default_rng(20260815)


def neighbor_sets(g):
    """Adjacency of a GeometricGraph as a list of neighbor sets."""
    return [set(nb) for nb in g.adjacency]


def random_pointset(rng, n, d, spread=3.0):
    from rgg_limits.pointproc import PointSet

    return PointSet(d, rng.random((n, d)) * spread - spread / 2.0)
