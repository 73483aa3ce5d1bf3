"""Trajectories to normalized, flattened feature vectors."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import BranchCutError, DimensionError
from .groups import GroupKind, log_coords
from .matrix import mat_inverse
from .synthesis import Trajectory


@dataclass(frozen=True, eq=False)
class IncrementSequence:
    """Per-step displacements ``log(g_t^-1 g_{t+1})``; ``increments`` has shape (T, algebra_dim)."""

    kind: GroupKind
    dt: float
    increments: np.ndarray

    @property
    def steps(self) -> int:
        return self.increments.shape[0]


@dataclass(frozen=True, eq=False)
class NormalizationStats:
    mean: np.ndarray
    sigma: float
    count: int

    def __post_init__(self):
        mean = np.array(self.mean, dtype=np.float64).reshape(-1)
        object.__setattr__(self, "mean", mean)
        if not (math.isfinite(self.sigma) and self.sigma > 0):
            raise ValueError(f"normalization sigma must be positive, got {self.sigma}")


def to_increments(traj: Trajectory) -> IncrementSequence:
    out = np.empty((traj.steps, traj.kind.algebra_dim))
    poses = traj.poses
    for t in range(traj.steps):
        rel = mat_inverse(poses[t].matrix) @ poses[t + 1].matrix
        try:
            out[t] = log_coords(traj.kind, rel)
        except BranchCutError as exc:
            raise BranchCutError(f"step {t}: {exc}") from exc
    return IncrementSequence(traj.kind, traj.dt, out)


def fit_stats(dataset: Sequence[IncrementSequence]) -> NormalizationStats:
    """Pooled mean vector and a single scalar RMS deviation over every increment."""
    if not dataset:
        raise ValueError("cannot fit normalization statistics on an empty dataset")
    pool = np.concatenate([seq.increments for seq in dataset], axis=0)
    if pool.shape[0] < 2:
        raise ValueError("need at least two increment vectors to fit normalization statistics")
    mean = pool.mean(axis=0)
    sigma = math.sqrt(float(np.mean(np.sum((pool - mean) ** 2, axis=1))))
    if sigma == 0.0:
        raise ValueError("all increments are identical; normalization would divide by zero")
    return NormalizationStats(mean, sigma, pool.shape[0])


def normalize(seq: IncrementSequence, stats: NormalizationStats) -> np.ndarray:
    """Row-major flattening: entry ``t * d + j`` is ``(increments[t, j] - mean[j]) / sigma``."""
    if seq.increments.shape[1] != stats.mean.shape[0]:
        raise DimensionError(
            f"increments have {seq.increments.shape[1]} coordinates, stats have {stats.mean.shape[0]}"
        )
    return ((seq.increments - stats.mean) / stats.sigma).reshape(-1)


def denormalize(features: np.ndarray, stats: NormalizationStats) -> np.ndarray:
    d = stats.mean.shape[0]
    return np.asarray(features).reshape(-1, d) * stats.sigma + stats.mean


def feature_matrix(seqs: Sequence[IncrementSequence], stats: NormalizationStats) -> np.ndarray:
    return np.stack([normalize(s, stats) for s in seqs])
