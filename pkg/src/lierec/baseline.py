"""Closed-form generator recovery and error reporting.

With exact exponential steps every increment equals ``dt * xi``, so averaging
the increments and dividing by ``dt`` recovers the generator exactly on clean
data. Under i.i.d. per-step noise the average is the sample mean of the
perturbed generators.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import KindMismatchError
from .groups import AlgebraVector
from .preprocessing import to_increments
from .synthesis import Trajectory


def estimate_mean_increment(traj: Trajectory) -> AlgebraVector:
    inc = to_increments(traj).increments
    return AlgebraVector(traj.kind, inc.sum(axis=0) / (traj.steps * traj.dt))


@dataclass(frozen=True, eq=False)
class ErrorReport:
    model_abs: np.ndarray
    baseline_abs: np.ndarray
    model_euclid: float
    baseline_euclid: float


def compare(model_pred: AlgebraVector, baseline_pred: AlgebraVector, truth: AlgebraVector) -> ErrorReport:
    if not (model_pred.kind is baseline_pred.kind is truth.kind):
        raise KindMismatchError("model, baseline and truth must belong to the same group")
    m = np.abs(model_pred.coords - truth.coords)
    b = np.abs(baseline_pred.coords - truth.coords)
    return ErrorReport(m, b, float(np.linalg.norm(m)), float(np.linalg.norm(b)))


@dataclass(frozen=True, eq=False)
class ErrorSummary:
    count: int
    model_mean: np.ndarray
    model_max: np.ndarray
    baseline_mean: np.ndarray
    baseline_max: np.ndarray
    model_euclid_mean: float
    baseline_euclid_mean: float


def summarize(reports: Sequence[ErrorReport]) -> ErrorSummary:
    if not reports:
        raise ValueError("no error reports to summarize")
    m = np.stack([r.model_abs for r in reports])
    b = np.stack([r.baseline_abs for r in reports])
    return ErrorSummary(
        len(reports),
        m.mean(axis=0),
        m.max(axis=0),
        b.mean(axis=0),
        b.max(axis=0),
        float(np.mean([r.model_euclid for r in reports])),
        float(np.mean([r.baseline_euclid for r in reports])),
    )
