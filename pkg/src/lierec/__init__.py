"""Recover the constant generator of an exponential flow on a matrix Lie group.

Trajectories ``g_{t+1} = g_t exp(dt * xi)`` on SE(2), SE(3), SO(3) or
SL(2,R) are reduced to normalized log-increments, from which either a
closed-form average or a small ReLU network regresses ``xi``.
"""

from .baseline import compare, estimate_mean_increment
from .encoder import EncoderModel, TrainConfig, TrainReport, fit_encoder, forward, predict_generator, train
from .groups import (
    AlgebraVector,
    GroupElement,
    GroupKind,
    Regime,
    classify_regime,
    compose,
    group_exp,
    group_log,
    hat,
    vee,
)
from .preprocessing import IncrementSequence, NormalizationStats, fit_stats, normalize, to_increments
from .synthesis import SamplingConfig, Trajectory, generate_clean, generate_dataset, generate_noisy, sample_generator

__version__ = "0.1.0"

__all__ = [
    "AlgebraVector",
    "EncoderModel",
    "GroupElement",
    "GroupKind",
    "IncrementSequence",
    "NormalizationStats",
    "Regime",
    "SamplingConfig",
    "TrainConfig",
    "TrainReport",
    "Trajectory",
    "classify_regime",
    "compare",
    "compose",
    "estimate_mean_increment",
    "fit_encoder",
    "fit_stats",
    "forward",
    "generate_clean",
    "generate_dataset",
    "generate_noisy",
    "group_exp",
    "group_log",
    "hat",
    "normalize",
    "predict_generator",
    "sample_generator",
    "to_increments",
    "train",
    "vee",
]
