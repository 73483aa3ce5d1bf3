"""Two-hidden-layer ReLU regressor from normalized increments to the generator.

    f(x) = W3 relu(W2 relu(W1 x + b1) + b2) + b3

Forward, backward and both optimizers are written out by hand in numpy.
The loss of one sample is the squared Euclidean error; a batch loss is the
mean of those over the batch.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DimensionError, KindMismatchError, NumericalError
from .groups import AlgebraVector, GroupKind
from .preprocessing import NormalizationStats, feature_matrix, fit_stats, normalize, to_increments
from .synthesis import Trajectory

log = logging.getLogger(__name__)

PARAM_NAMES = ("W1", "b1", "W2", "b2", "W3", "b3")


@dataclass(eq=False)
class EncoderModel:
    kind: GroupKind
    stats: NormalizationStats
    params: dict[str, np.ndarray]

    def __post_init__(self):
        missing = [k for k in PARAM_NAMES if k not in self.params]
        if missing:
            raise DimensionError(f"model is missing parameters {missing}")
        p = self.params
        w1, w2, w3 = p["W1"], p["W2"], p["W3"]
        ok = (
            w1.ndim == w2.ndim == w3.ndim == 2
            and w2.shape[1] == w1.shape[0]
            and w3.shape[1] == w2.shape[0]
            and p["b1"].shape == (w1.shape[0],)
            and p["b2"].shape == (w2.shape[0],)
            and p["b3"].shape == (w3.shape[0],)
        )
        if not ok:
            shapes = {k: p[k].shape for k in PARAM_NAMES}
            raise DimensionError(f"inconsistent layer shapes: {shapes}")
        if w3.shape[0] != self.kind.algebra_dim:
            raise DimensionError(f"output dim {w3.shape[0]} does not match {self.kind} algebra dim")
        if self.stats.mean.shape[0] != self.kind.algebra_dim:
            raise DimensionError("normalization stats do not match the group's algebra dimension")
        if w1.shape[1] % self.kind.algebra_dim:
            raise DimensionError(f"input dim {w1.shape[1]} is not a multiple of the algebra dim")
        for k in PARAM_NAMES:
            if not np.all(np.isfinite(p[k])):
                raise NumericalError(f"parameter {k} has non-finite entries")

    @property
    def input_dim(self) -> int:
        return self.params["W1"].shape[1]

    @property
    def hidden_dims(self) -> tuple[int, int]:
        return self.params["W1"].shape[0], self.params["W2"].shape[0]

    @property
    def output_dim(self) -> int:
        return self.params["W3"].shape[0]

    @property
    def steps(self) -> int:
        return self.input_dim // self.kind.algebra_dim


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float = 1e-3
    batch_size: int = 64
    epochs: int = 50
    optimizer: str = "adam"
    hidden_dims: tuple[int, int] = (64, 64)
    betas: tuple[float, float] = (0.9, 0.999)
    epsilon: float = 1e-8
    seed: int = 0
    val_fraction: float = 0.1

    def __post_init__(self):
        if not (self.learning_rate > 0 and math.isfinite(self.learning_rate)):
            raise ValueError(f"learning_rate must be positive, got {self.learning_rate}")
        if self.batch_size < 1:
            raise ValueError(f"batch_size must be >= 1, got {self.batch_size}")
        if self.epochs < 0:
            raise ValueError(f"epochs must be >= 0, got {self.epochs}")
        if self.optimizer not in ("adam", "sgd"):
            raise ValueError(f"optimizer must be 'adam' or 'sgd', got {self.optimizer!r}")
        if len(self.hidden_dims) != 2 or min(self.hidden_dims) < 1:
            raise ValueError(f"hidden_dims must be two positive widths, got {self.hidden_dims}")
        if not 0 <= self.val_fraction < 1:
            raise ValueError("val_fraction must lie in [0, 1)")


@dataclass
class TrainReport:
    initial_train_loss: float
    initial_val_loss: float | None
    train_loss: list[float] = field(default_factory=list)
    val_loss: list[float] = field(default_factory=list)

    @property
    def epochs(self) -> int:
        return len(self.train_loss)


# -- model construction ----------------------------------------------------------


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(int(seed) & ((1 << 64) - 1))))


def init_model(
    kind: GroupKind,
    stats: NormalizationStats,
    input_dim: int,
    hidden_dims: Sequence[int] = (64, 64),
    seed: int = 0,
) -> EncoderModel:
    """Uniform init with bound sqrt(6 / (fan_in + fan_out)) per layer, zero biases."""
    rng = _rng(seed)
    dims = [input_dim, *hidden_dims, kind.algebra_dim]
    params = {}
    for i in range(3):
        fan_in, fan_out = dims[i], dims[i + 1]
        bound = math.sqrt(6.0 / (fan_in + fan_out))
        params[f"W{i + 1}"] = rng.uniform(-bound, bound, size=(fan_out, fan_in))
        params[f"b{i + 1}"] = np.zeros(fan_out)
    return EncoderModel(kind, stats, params)


def zero_model(kind: GroupKind, stats: NormalizationStats, input_dim: int, hidden_dims=(64, 64)) -> EncoderModel:
    dims = [input_dim, *hidden_dims, kind.algebra_dim]
    params = {}
    for i in range(3):
        params[f"W{i + 1}"] = np.zeros((dims[i + 1], dims[i]))
        params[f"b{i + 1}"] = np.zeros(dims[i + 1])
    return EncoderModel(kind, stats, params)


# -- forward / loss / backward ----------------------------------------------------


def _relu(z: np.ndarray) -> np.ndarray:
    return np.maximum(z, 0.0)


def _forward_cache(params: dict[str, np.ndarray], x: np.ndarray):
    z1 = x @ params["W1"].T + params["b1"]
    h1 = _relu(z1)
    z2 = h1 @ params["W2"].T + params["b2"]
    h2 = _relu(z2)
    out = h2 @ params["W3"].T + params["b3"]
    return out, (z1, h1, z2, h2)


def forward_batch(model: EncoderModel, x: np.ndarray) -> np.ndarray:
    x = np.atleast_2d(np.asarray(x, dtype=np.float64))
    if x.shape[1] != model.input_dim:
        raise DimensionError(f"expected {model.input_dim} input features, got {x.shape[1]}")
    return _forward_cache(model.params, x)[0]


def forward(model: EncoderModel, x) -> AlgebraVector:
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1:
        raise DimensionError("forward takes a single feature vector; use forward_batch for batches")
    return AlgebraVector(model.kind, forward_batch(model, x)[0])


def loss_mse(pred, target) -> float:
    """Squared Euclidean error; for 2-D inputs, its mean over rows."""
    if isinstance(pred, AlgebraVector):
        if isinstance(target, AlgebraVector) and target.kind is not pred.kind:
            raise KindMismatchError(f"kind mismatch: {pred.kind} vs {target.kind}")
        pred = pred.coords
    if isinstance(target, AlgebraVector):
        target = target.coords
    pred = np.asarray(pred, dtype=np.float64)
    target = np.asarray(target, dtype=np.float64)
    if pred.shape != target.shape:
        raise DimensionError(f"prediction shape {pred.shape} does not match target shape {target.shape}")
    sq = np.sum((pred - target) ** 2, axis=-1)
    return float(np.mean(sq))


def loss_and_grads(params: dict[str, np.ndarray], x: np.ndarray, y: np.ndarray):
    """Mean batch loss and its exact gradient. relu'(0) is taken as 0."""
    out, (z1, h1, z2, h2) = _forward_cache(params, x)
    diff = out - y
    n = x.shape[0]
    loss = float(np.sum(diff * diff) / n)
    d_out = 2.0 * diff / n
    grads = {"W3": d_out.T @ h2, "b3": d_out.sum(axis=0)}
    d_z2 = (d_out @ params["W3"]) * (z2 > 0)
    grads["W2"] = d_z2.T @ h1
    grads["b2"] = d_z2.sum(axis=0)
    d_z1 = (d_z2 @ params["W2"]) * (z1 > 0)
    grads["W1"] = d_z1.T @ x
    grads["b1"] = d_z1.sum(axis=0)
    return loss, grads


def backward(model: EncoderModel, x, target) -> dict[str, np.ndarray]:
    """Gradients of the single-sample loss ||f(x) - target||^2 w.r.t. every parameter."""
    x = np.asarray(x, dtype=np.float64).reshape(1, -1)
    if x.shape[1] != model.input_dim:
        raise DimensionError(f"expected {model.input_dim} input features, got {x.shape[1]}")
    y = target.coords if isinstance(target, AlgebraVector) else np.asarray(target, dtype=np.float64)
    if y.shape[-1] != model.output_dim:
        raise DimensionError(f"expected a target of length {model.output_dim}")
    return loss_and_grads(model.params, x, y.reshape(1, -1))[1]


# -- optimizers -----------------------------------------------------------------------


class SGD:
    def __init__(self, lr: float):
        self.lr = lr

    def step(self, params: dict[str, np.ndarray], grads: dict[str, np.ndarray]) -> None:
        for k in params:
            params[k] -= self.lr * grads[k]


class Adam:
    def __init__(self, lr: float = 1e-3, beta1: float = 0.9, beta2: float = 0.999, epsilon: float = 1e-8):
        self.lr = lr
        self.beta1 = beta1
        self.beta2 = beta2
        self.epsilon = epsilon
        self.m: dict[str, np.ndarray] = {}
        self.v: dict[str, np.ndarray] = {}
        self.t = 0

    def step(self, params: dict[str, np.ndarray], grads: dict[str, np.ndarray]) -> None:
        self.t += 1
        bc1 = 1.0 - self.beta1**self.t
        bc2 = 1.0 - self.beta2**self.t
        for k in params:
            g = grads[k]
            if k not in self.m:
                self.m[k] = np.zeros_like(g)
                self.v[k] = np.zeros_like(g)
            self.m[k] = self.beta1 * self.m[k] + (1.0 - self.beta1) * g
            self.v[k] = self.beta2 * self.v[k] + (1.0 - self.beta2) * (g * g)
            params[k] -= self.lr * (self.m[k] / bc1) / (np.sqrt(self.v[k] / bc2) + self.epsilon)


def make_optimizer(config: TrainConfig):
    if config.optimizer == "sgd":
        return SGD(config.learning_rate)
    return Adam(config.learning_rate, config.betas[0], config.betas[1], config.epsilon)


# -- training -------------------------------------------------------------------------


def _checked_loss(value: float, epoch: int, lr: float) -> float:
    if not math.isfinite(value):
        raise NumericalError(
            f"training loss became {value} at epoch {epoch}; learning rate {lr:g} is likely too high"
        )
    return value


def train(
    features: np.ndarray,
    targets: np.ndarray,
    config: TrainConfig,
    *,
    kind: GroupKind,
    stats: NormalizationStats,
    val_features: np.ndarray | None = None,
    val_targets: np.ndarray | None = None,
) -> tuple[EncoderModel, TrainReport]:
    """Minibatch training for a fixed number of epochs; deterministic given ``config.seed``.

    Losses in the report are full-pass means evaluated after each epoch.
    """
    x = np.asarray(features, dtype=np.float64)
    y = np.asarray(targets, dtype=np.float64)
    if x.ndim != 2 or x.shape[0] == 0:
        raise ValueError("training set must be a non-empty 2-D feature matrix")
    if y.shape != (x.shape[0], kind.algebra_dim):
        raise DimensionError(f"targets must have shape ({x.shape[0]}, {kind.algebra_dim}), got {y.shape}")
    has_val = val_features is not None and len(val_features) > 0

    model = init_model(kind, stats, x.shape[1], config.hidden_dims, config.seed)
    params = model.params
    optimizer = make_optimizer(config)
    shuffle_rng = _rng(config.seed + 1)

    def evaluate():
        tr = loss_mse(_forward_cache(params, x)[0], y)
        va = loss_mse(_forward_cache(params, val_features)[0], val_targets) if has_val else None
        return tr, va

    tr0, va0 = evaluate()
    report = TrainReport(_checked_loss(tr0, 0, config.learning_rate), va0)
    n = x.shape[0]
    for epoch in range(1, config.epochs + 1):
        order = shuffle_rng.permutation(n)
        for start in range(0, n, config.batch_size):
            idx = order[start : start + config.batch_size]
            loss, grads = loss_and_grads(params, x[idx], y[idx])
            _checked_loss(loss, epoch, config.learning_rate)
            optimizer.step(params, grads)
        tr, va = evaluate()
        report.train_loss.append(_checked_loss(tr, epoch, config.learning_rate))
        if va is not None:
            report.val_loss.append(va)
        log.debug("epoch %d train %.3e val %s", epoch, tr, va)
    return EncoderModel(kind, stats, params), report


def split_indices(n: int, val_fraction: float, seed: int) -> tuple[np.ndarray, np.ndarray]:
    order = _rng(seed + 2).permutation(n)
    n_val = int(round(val_fraction * n)) if n > 1 else 0
    n_val = min(n_val, n - 1)
    return np.sort(order[n_val:]), np.sort(order[:n_val])


@dataclass
class FitResult:
    model: EncoderModel
    report: TrainReport
    train_index: np.ndarray
    val_index: np.ndarray


def fit_encoder(trajectories: Sequence[Trajectory], config: TrainConfig) -> FitResult:
    """Split, fit normalization on the training part only, then train."""
    if not trajectories:
        raise ValueError("cannot train on an empty dataset")
    kind = trajectories[0].kind
    if any(t.kind is not kind for t in trajectories):
        raise KindMismatchError("dataset mixes group kinds")
    seqs = [to_increments(t) for t in trajectories]
    targets = np.stack([t.true_xi.coords for t in trajectories])
    tr_idx, va_idx = split_indices(len(trajectories), config.val_fraction, config.seed)
    stats = fit_stats([seqs[i] for i in tr_idx])
    feats = feature_matrix(seqs, stats)
    model, report = train(
        feats[tr_idx],
        targets[tr_idx],
        config,
        kind=kind,
        stats=stats,
        val_features=feats[va_idx],
        val_targets=targets[va_idx],
    )
    return FitResult(model, report, tr_idx, va_idx)


# -- inference ---------------------------------------------------------------------------


def _check_compatible(model: EncoderModel, traj: Trajectory) -> None:
    if traj.kind is not model.kind:
        raise KindMismatchError(f"trajectory group {traj.kind} does not match model group {model.kind}")
    if traj.steps * model.kind.algebra_dim != model.input_dim:
        raise DimensionError(f"model expects {model.steps} steps, trajectory has {traj.steps}")


def predict_generator(model: EncoderModel, traj: Trajectory) -> AlgebraVector:
    _check_compatible(model, traj)
    return forward(model, normalize(to_increments(traj), model.stats))


def predict_many(model: EncoderModel, trajectories: Sequence[Trajectory]) -> np.ndarray:
    for t in trajectories:
        _check_compatible(model, t)
    if not trajectories:
        return np.zeros((0, model.output_dim))
    x = feature_matrix([to_increments(t) for t in trajectories], model.stats)
    return forward_batch(model, x)
