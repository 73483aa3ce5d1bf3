import math

import numpy as np
import pytest

from lierec.groups import AlgebraVector, GroupKind
from lierec.preprocessing import (
    IncrementSequence,
    NormalizationStats,
    denormalize,
    feature_matrix,
    fit_stats,
    normalize,
    to_increments,
)
from lierec.synthesis import SamplingConfig, generate_clean, generate_dataset

from conftest import ALL_KINDS


def seq(rows, kind=GroupKind.SO3):
    return IncrementSequence(kind, 0.1, np.array(rows, dtype=float))


@pytest.mark.parametrize("kind", ALL_KINDS)
def test_clean_increments_equal_scaled_generator(kind):
    cfg = SamplingConfig(kind, seed=3)
    for traj in generate_dataset(cfg, 10):
        inc = to_increments(traj)
        assert inc.increments.shape == (cfg.steps, kind.algebra_dim)
        np.testing.assert_allclose(inc.increments, np.broadcast_to(cfg.dt * traj.true_xi.coords, inc.increments.shape), atol=1e-9, rtol=0)


def test_zero_generator_increments():
    kind = GroupKind.SE3
    traj = generate_clean(AlgebraVector(kind, np.zeros(6)), SamplingConfig(kind))
    assert np.all(to_increments(traj).increments == 0)


@pytest.mark.parametrize("kind", ALL_KINDS)
def test_noisy_increments_match_injected(kind):
    cfg = SamplingConfig(kind, noise_sigma=0.01, seed=4)
    for traj in generate_dataset(cfg, 5):
        expected = cfg.dt * (traj.true_xi.coords + traj.perturbations)
        np.testing.assert_allclose(to_increments(traj).increments, expected, atol=1e-9, rtol=0)


def test_fit_stats_hand_example():
    stats = fit_stats([seq([[1, 0, 0]]), seq([[3, 0, 0]])])
    np.testing.assert_array_equal(stats.mean, [2, 0, 0])
    assert stats.sigma == 1.0
    assert stats.count == 2


def test_fit_stats_pools_norms_into_one_scalar():
    # deviations (1, 1, 0) and (-1, -1, 0): squared norms 2 each, so sigma = sqrt(2)
    stats = fit_stats([seq([[1, 1, 0], [-1, -1, 0]])])
    assert stats.sigma == pytest.approx(math.sqrt(2), abs=1e-15)


def test_fit_stats_rejects_degenerate():
    with pytest.raises(ValueError):
        fit_stats([seq([[1, 2, 3], [1, 2, 3]])])
    with pytest.raises(ValueError):
        fit_stats([seq([[1, 2, 3]])])
    with pytest.raises(ValueError):
        fit_stats([])
    with pytest.raises(ValueError):
        NormalizationStats(np.zeros(3), 0.0, 5)


def test_fit_stats_mean_near_zero_for_symmetric_sampling():
    a, dt = 1.0, 0.1
    cfg = SamplingConfig(GroupKind.SE2, bound_a=a, dt=dt, seed=21)
    seqs = [to_increments(t) for t in generate_dataset(cfg, 400)]
    stats = fit_stats(seqs)
    # clean increments repeat within a trajectory: the independent sample size is
    # the trajectory count, not the pooled increment count
    n_independent = stats.count // cfg.steps
    assert np.all(np.abs(stats.mean) < 3 * (a * dt) / math.sqrt(3 * n_independent))


def test_fit_stats_permutation_invariant(rng):
    seqs = [seq(rng.normal(size=(5, 3))) for _ in range(8)]
    a = fit_stats(seqs)
    b = fit_stats(list(reversed(seqs)))
    np.testing.assert_allclose(a.mean, b.mean, atol=1e-15)
    assert a.sigma == pytest.approx(b.sigma, abs=1e-15)


def test_normalize_layout_and_identity_stats():
    s = seq([[1, 2, 3], [4, 5, 6]])
    ident = NormalizationStats(np.zeros(3), 1.0, 1)
    np.testing.assert_array_equal(normalize(s, ident), [1, 2, 3, 4, 5, 6])
    stats = NormalizationStats([1, 2, 3], 2.0, 1)
    np.testing.assert_array_equal(normalize(s, stats), [0, 0, 0, 1.5, 1.5, 1.5])
    assert np.all(normalize(seq([[1, 2, 3]] * 4), stats) == 0)


@pytest.mark.parametrize("kind", ALL_KINDS)
def test_normalized_training_pool_is_standardized(kind):
    cfg = SamplingConfig(kind, noise_sigma=0.01, seed=8)
    seqs = [to_increments(t) for t in generate_dataset(cfg, 50)]
    stats = fit_stats(seqs)
    feats = feature_matrix(seqs, stats)
    assert feats.shape == (50, cfg.steps * kind.algebra_dim)
    pooled = feats.reshape(-1, kind.algebra_dim)
    assert np.linalg.norm(pooled.mean(axis=0)) < 1e-10
    assert abs(math.sqrt(np.mean(np.sum(pooled**2, axis=1))) - 1) < 1e-10
    for s, f in zip(seqs, feats):
        np.testing.assert_allclose(denormalize(f, stats), s.increments, atol=1e-12, rtol=0)
