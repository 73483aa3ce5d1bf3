import math

import numpy as np
import pytest

from lierec.baseline import compare, estimate_mean_increment, summarize
from lierec.errors import KindMismatchError
from lierec.groups import AlgebraVector, GroupKind
from lierec.synthesis import SamplingConfig, Trajectory, generate_clean, generate_dataset

from conftest import ALL_KINDS


@pytest.mark.parametrize("kind", ALL_KINDS)
def test_clean_recovery_is_exact(kind):
    for traj in generate_dataset(SamplingConfig(kind, seed=13), 50):
        est = estimate_mean_increment(traj)
        assert np.max(np.abs(est.coords - traj.true_xi.coords)) < 1e-9


def test_zero_trajectory():
    traj = generate_clean(AlgebraVector(GroupKind.SE3, np.zeros(6)), SamplingConfig(GroupKind.SE3))
    assert np.all(estimate_mean_increment(traj).coords == 0)


@pytest.mark.parametrize("kind", ALL_KINDS)
def test_time_reversal(kind):
    for traj in generate_dataset(SamplingConfig(kind, noise_sigma=0.02, seed=1), 10):
        rev = Trajectory(kind, -traj.dt, tuple(reversed(traj.poses)), traj.true_xi)
        np.testing.assert_allclose(
            estimate_mean_increment(rev).coords, estimate_mean_increment(traj).coords, atol=1e-9, rtol=0
        )


@pytest.mark.parametrize("kind", ALL_KINDS)
def test_noisy_estimate_is_mean_of_injected(kind):
    for traj in generate_dataset(SamplingConfig(kind, noise_sigma=0.05, seed=17), 20):
        expected = traj.true_xi.coords + traj.perturbations.mean(axis=0)
        np.testing.assert_allclose(estimate_mean_increment(traj).coords, expected, atol=1e-9, rtol=0)


def test_noisy_estimator_unbiased_monte_carlo():
    sigma, steps = 0.05, 20
    cfg = SamplingConfig(GroupKind.SE2, noise_sigma=sigma, steps=steps, seed=99)
    errors = np.stack([
        estimate_mean_increment(t).coords - t.true_xi.coords for t in generate_dataset(cfg, 1000)
    ])
    bound = 3 * sigma / math.sqrt(steps)
    assert np.all(np.abs(errors.mean(axis=0)) < bound)
    assert np.all(np.abs(errors).mean(axis=0) < bound)


def test_compare_examples():
    truth = AlgebraVector(GroupKind.SO3, [1.0, 0.0, 0.0])
    rep = compare(truth, truth, truth)
    assert np.all(rep.model_abs == 0) and rep.baseline_euclid == 0
    pred = AlgebraVector(GroupKind.SO3, [0.97, 0.0, 0.0])
    rep = compare(pred, truth, truth)
    np.testing.assert_allclose(rep.model_abs, [0.03, 0, 0], atol=1e-15)
    assert rep.model_euclid == pytest.approx(0.03)
    with pytest.raises(KindMismatchError):
        compare(pred, AlgebraVector(GroupKind.SE2, [1, 0, 0]), truth)


def test_summarize_aggregates():
    truth = AlgebraVector(GroupKind.SO3, [0.0, 0.0, 0.0])
    reps = [
        compare(AlgebraVector(GroupKind.SO3, [0.1, 0.0, -0.2]), truth, truth),
        compare(AlgebraVector(GroupKind.SO3, [0.3, 0.0, 0.0]), truth, truth),
    ]
    s = summarize(reps)
    np.testing.assert_allclose(s.model_mean, [0.2, 0.0, 0.1])
    np.testing.assert_allclose(s.model_max, [0.3, 0.0, 0.2])
    assert s.count == 2
