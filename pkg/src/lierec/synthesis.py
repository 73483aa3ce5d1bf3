"""Synthetic exponential-flow trajectories.

Randomness
----------
Every trajectory draws from its own PCG64 stream, seeded by
``SeedSequence(seed, spawn_key=(index,))``. Index ``i`` of a dataset is thus
reproducible on its own, independent of how many trajectories precede it or
which worker builds it. Within a stream the generator coordinates are drawn
first (``a * (2u - 1)`` per coordinate), then the per-step noise. Gaussian
variates come from the Box-Muller transform of uniform doubles, so nothing
depends on numpy's internal normal sampler.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import KindMismatchError
from .groups import (
    AlgebraVector,
    GroupElement,
    GroupKind,
    check_loggable,
    exp_coords,
    rotation_drift,
)

DEFAULT_BOUND = 1.0
DEFAULT_DT = 0.1
DEFAULT_STEPS = 20
RENORM_THRESHOLD = 1e-9
INJECTIVITY_MARGIN = math.pi

_SEED_MASK = (1 << 64) - 1


@dataclass(frozen=True)
class SamplingConfig:
    kind: GroupKind
    bound_a: float = DEFAULT_BOUND
    dt: float = DEFAULT_DT
    steps: int = DEFAULT_STEPS
    noise_sigma: float = 0.0
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "kind", GroupKind.parse(self.kind))
        if not (math.isfinite(self.bound_a) and self.bound_a >= 0):
            raise ValueError(f"bound_a must be a non-negative number, got {self.bound_a}")
        if not (math.isfinite(self.dt) and self.dt > 0):
            raise ValueError(f"dt must be positive, got {self.dt}")
        if int(self.steps) != self.steps or self.steps < 2:
            raise ValueError(f"steps must be an integer >= 2, got {self.steps}")
        if not (math.isfinite(self.noise_sigma) and self.noise_sigma >= 0):
            raise ValueError(f"noise_sigma must be non-negative, got {self.noise_sigma}")
        if self.bound_a * self.dt >= 0.5 * INJECTIVITY_MARGIN:
            raise ValueError(
                f"bound_a * dt = {self.bound_a * self.dt:.4g} must stay below {0.5 * INJECTIVITY_MARGIN:.4g} "
                "so per-step increments remain loggable"
            )


@dataclass(frozen=True, eq=False)
class Trajectory:
    kind: GroupKind
    dt: float
    poses: tuple[GroupElement, ...]
    true_xi: AlgebraVector
    noise_sigma: float = 0.0
    # per-step noise actually injected, shape (steps, algebra_dim); None when unknown
    perturbations: np.ndarray | None = field(default=None, repr=False)

    @property
    def steps(self) -> int:
        return len(self.poses) - 1

    def pose_array(self) -> np.ndarray:
        return np.stack([p.matrix for p in self.poses])


def trajectory_rng(seed: int, index: int) -> np.random.Generator:
    ss = np.random.SeedSequence(int(seed) & _SEED_MASK, spawn_key=(int(index),))
    return np.random.Generator(np.random.PCG64(ss))


def standard_normal(rng: np.random.Generator, size: int) -> np.ndarray:
    """Box-Muller: pairs (u1, u2) -> sqrt(-2 ln(1 - u1)) * (cos 2pi u2, sin 2pi u2)."""
    pairs = (size + 1) // 2
    u = rng.random((pairs, 2))
    radius = np.sqrt(-2.0 * np.log1p(-u[:, 0]))
    angle = 2.0 * np.pi * u[:, 1]
    z = np.column_stack([radius * np.cos(angle), radius * np.sin(angle)]).reshape(-1)
    return z[:size]


def sample_generator(config: SamplingConfig, rng: np.random.Generator) -> AlgebraVector:
    u = rng.random(config.kind.algebra_dim)
    return AlgebraVector(config.kind, config.bound_a * (2.0 * u - 1.0))


def renormalize(kind: GroupKind, m: np.ndarray) -> np.ndarray:
    """Pull a pose back onto the group once accumulated round-off exceeds 1e-9."""
    if kind is GroupKind.SL2R:
        det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
        if abs(det - 1.0) > RENORM_THRESHOLD:
            return m / math.sqrt(det)
        return m
    n = 3 if kind is GroupKind.SO3 else kind.ambient_dim - 1
    rot = m[:n, :n]
    if rotation_drift(rot) > RENORM_THRESHOLD:
        # one Newton step towards the orthogonal polar factor
        out = m.copy()
        out[:n, :n] = rot @ (3.0 * np.eye(n) - rot.T @ rot) / 2.0
        return out
    return m


def _integrate(kind: GroupKind, increments: list[np.ndarray]) -> tuple[GroupElement, ...]:
    pose = np.eye(kind.ambient_dim)
    poses = [GroupElement(kind, pose)]
    for step in increments:
        pose = renormalize(kind, pose @ step)
        poses.append(GroupElement(kind, pose))
    return tuple(poses)


def generate_clean(xi: AlgebraVector, config: SamplingConfig) -> Trajectory:
    if xi.kind is not config.kind:
        raise KindMismatchError(f"generator kind {xi.kind} does not match config kind {config.kind}")
    delta = xi * config.dt
    check_loggable(delta)
    step = exp_coords(xi.kind, delta.coords)
    poses = _integrate(xi.kind, [step] * config.steps)
    return Trajectory(xi.kind, config.dt, poses, xi, 0.0, np.zeros((config.steps, xi.kind.algebra_dim)))


def generate_noisy(xi: AlgebraVector, config: SamplingConfig, rng: np.random.Generator) -> Trajectory:
    if config.noise_sigma == 0:
        return generate_clean(xi, config)
    if xi.kind is not config.kind:
        raise KindMismatchError(f"generator kind {xi.kind} does not match config kind {config.kind}")
    d = xi.kind.algebra_dim
    eps = config.noise_sigma * standard_normal(rng, config.steps * d).reshape(config.steps, d)
    steps = []
    for e in eps:
        delta = AlgebraVector(xi.kind, (xi.coords + e) * config.dt)
        check_loggable(delta)
        steps.append(exp_coords(xi.kind, delta.coords))
    poses = _integrate(xi.kind, steps)
    return Trajectory(xi.kind, config.dt, poses, xi, config.noise_sigma, eps)


def generate_one(config: SamplingConfig, index: int) -> Trajectory:
    rng = trajectory_rng(config.seed, index)
    xi = sample_generator(config, rng)
    return generate_noisy(xi, config, rng)


def generate_dataset(config: SamplingConfig, count: int, start: int = 0) -> list[Trajectory]:
    """Trajectories ``start .. start + count - 1``; trajectory i uses stream i."""
    return [generate_one(config, i) for i in range(start, start + count)]
