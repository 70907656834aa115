"""Point process module: deterministic streams, supports, and file formats."""

from __future__ import annotations

import numpy as np
import pytest

from rgg_limits.pointproc import (
    CoupledSample,
    Distribution,
    PointSet,
    blocked,
    sample_binomial,
    sample_homogeneous_box,
    sample_poisson_coupled,
    segment_mixture,
    substream,
    transform,
    uniform_cube,
)


# ---------------------------------------------------------------------------
# substreams


def test_substream_deterministic_and_path_sensitive():
    a = substream(7, 1, 2).random(5)
    b = substream(7, 1, 2).random(5)
    c = substream(7, 2, 1).random(5)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)
    assert not np.array_equal(substream(7).random(5), substream(8).random(5))


# ---------------------------------------------------------------------------
# PointSet container


def test_pointset_is_frozen_and_validated():
    ps = PointSet(2, [[0.0, 0.0], [1.0, 2.0]])
    assert len(ps) == 2
    with pytest.raises(ValueError):
        ps.points[0, 0] = 5.0
    with pytest.raises(ValueError):
        PointSet(2, [[np.nan, 0.0]])


def test_pointset_prefix():
    ps = PointSet(1, [[0.0], [1.0], [2.0]])
    assert np.array_equal(ps.prefix(2).points, ps.points[:2])
    assert ps.prefix(0).points.shape == (0, 1)


def test_pointset_csv_roundtrip_exact():
    rng = np.random.default_rng(3)
    ps = PointSet(3, rng.random((17, 3)) * 100 - 50)
    back = PointSet.from_csv(ps.to_csv())
    assert back.dim == 3
    assert np.array_equal(back.points, ps.points)  # bit-exact via repr
    assert ps.to_csv().splitlines()[0] == "dim,3"


def test_pointset_csv_rejects_missing_header():
    with pytest.raises(ValueError):
        PointSet.from_csv("0.0,0.0\n1.0,1.0\n")


# ---------------------------------------------------------------------------
# distributions


def test_uniform_cube_support_is_centered_half_open():
    mu = uniform_cube(2)
    ps = sample_binomial(mu, 4000, seed=0)
    assert np.all(ps.points >= -0.5)
    assert np.all(ps.points < 0.5)
    # both halves of each axis get hit
    assert np.min(ps.points) < -0.25
    assert np.max(ps.points) > 0.25


def test_distribution_validation_errors():
    with pytest.raises(ValueError):
        Distribution(dim=0)
    with pytest.raises(ValueError):
        Distribution(dim=1, cell_values=np.array([-1.0]))
    with pytest.raises(ValueError):
        Distribution(dim=2, cell_values=np.ones((3, 3)))  # wrong side for m=M=1
    with pytest.raises(ValueError):
        segment_mixture(2, [((0, 0), (1, 1), -0.5)])


def test_blocked_density_concentrates_mass():
    # all mass in the first cell of a 2x2 grid over Q_1
    vals = np.array([[4.0, 0.0], [0.0, 0.0]])
    mu = blocked(2, m=2, M=1, values=vals)
    ps = sample_binomial(mu, 500, seed=1)
    assert np.all(ps.points < 0.0)  # first half-open cell on each axis


def test_segment_sampling_lies_on_segments():
    a, b = np.array([-0.4, -0.4]), np.array([0.4, 0.4])
    mu = segment_mixture(2, [(a, b, 1.0)])
    ps = sample_binomial(mu, 300, seed=2)
    diag = b - a
    rel = (ps.points - a) @ diag / (diag @ diag)
    recon = a + np.outer(rel, diag)
    assert np.allclose(recon, ps.points, atol=1e-9)
    assert np.all(rel >= -1e-12) and np.all(rel <= 1 + 1e-12)


def test_segment_mixture_with_ac_part():
    mu = segment_mixture(
        2, [((-0.4, 0.0), (0.4, 0.0), 0.5)], ac=uniform_cube(2), ac_weight=0.5)
    ps = sample_binomial(mu, 2000, seed=3)
    on_axis = np.isclose(ps.points[:, 1], 0.0, atol=1e-12)
    frac = float(np.mean(on_axis))
    assert 0.4 < frac < 0.6


# ---------------------------------------------------------------------------
# samplers


def test_binomial_prefix_property():
    mu = uniform_cube(3)
    small = sample_binomial(mu, 50, seed=11)
    big = sample_binomial(mu, 500, seed=11)
    assert np.array_equal(big.points[:50], small.points)


def test_binomial_points_are_distinct():
    ps = sample_binomial(uniform_cube(1), 2000, seed=4)
    assert len(np.unique(ps.points, axis=0)) == len(ps)


def test_homogeneous_box_support_and_mean_count():
    lam, s, d = 2.0, 6.0, 2
    counts = []
    for seed in range(200):
        ps = sample_homogeneous_box(lam, s, d, seed)
        assert np.all(ps.points >= -s / 2) and np.all(ps.points < s / 2)
        counts.append(len(ps))
    mean = np.mean(counts)
    expect = lam * s ** d
    assert abs(mean - expect) < 4 * np.sqrt(expect / len(counts))


def test_homogeneous_box_rejects_bad_params():
    with pytest.raises(ValueError):
        sample_homogeneous_box(0.0, 1.0, 1, 0)
    with pytest.raises(ValueError):
        sample_homogeneous_box(1.0, -1.0, 1, 0)


def test_poisson_coupling_shares_stream():
    mu = uniform_cube(2)
    cs = sample_poisson_coupled(mu, t=40.0, seed=5, n=30)
    assert isinstance(cs, CoupledSample)
    xs = cs.binomial()
    ps = cs.poisson()
    assert len(xs) == 30
    assert len(ps) == cs.poisson_count
    k = min(len(xs), len(ps))
    assert np.array_equal(xs.points[:k], ps.points[:k])
    # same coupling again is bit-identical
    cs2 = sample_poisson_coupled(mu, t=40.0, seed=5, n=30)
    assert cs2.poisson_count == cs.poisson_count
    assert np.array_equal(cs2.prefix_points, cs.prefix_points)


def test_poisson_count_varies_with_seed_and_matches_mean():
    mu = uniform_cube(1)
    counts = [sample_poisson_coupled(mu, t=25.0, seed=s).poisson_count
              for s in range(300)]
    assert len(set(counts)) > 10
    assert abs(np.mean(counts) - 25.0) < 4 * np.sqrt(25.0 / len(counts))


def test_coupled_prefix_overflow_raises():
    cs = sample_poisson_coupled(uniform_cube(1), t=5.0, seed=6, n=3)
    with pytest.raises(ValueError):
        cs.binomial(len(cs.prefix_points) + 1)


# ---------------------------------------------------------------------------
# transform


def test_transform_scale_and_shift():
    ps = PointSet(2, [[1.0, -2.0], [0.5, 0.25]])
    out = transform(ps, 2.0, shift=[1.0, 0.0])
    assert np.allclose(out.points, [[3.0, -4.0], [2.0, 0.5]])
    with pytest.raises(ValueError):
        transform(ps, 0.0)
    with pytest.raises(ValueError):
        transform(ps, -1.0)


def test_transform_realizes_radius_change():
    """Scaling by 1/r turns a radius-r graph question into a radius-1 one."""
    from rgg_limits.geograph import build_graph

    rng = np.random.default_rng(9)
    ps = PointSet(2, rng.random((40, 2)) * 4 - 2)
    r = 0.75
    g_r = build_graph(ps, r)
    g_1 = build_graph(transform(ps, 1.0 / r), 1.0)
    assert g_r.adjacency == g_1.adjacency
