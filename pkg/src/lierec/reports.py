"""Evaluation tables and figure data shared by the CLI."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .baseline import compare, estimate_mean_increment, summarize
from .encoder import EncoderModel, predict_many
from .groups import AlgebraVector, GroupKind, classify_regime
from .svg import line_chart, scatter_chart
from .synthesis import SamplingConfig, Trajectory, generate_clean


@dataclass
class Evaluation:
    kind: GroupKind
    header: list[str]
    rows: list[list]
    model_mean: np.ndarray
    model_max: np.ndarray
    baseline_mean: np.ndarray
    baseline_max: np.ndarray
    regime_match_rate: float | None = None


def evaluation_header(kind: GroupKind) -> list[str]:
    d = range(kind.algebra_dim)
    cols = ["index"]
    for prefix in ("true", "mlp", "base", "mlp_err", "base_err"):
        cols += [f"{prefix}_{j}" for j in d]
    cols += ["mlp_euclid", "base_euclid"]
    if kind is GroupKind.SL2R:
        cols += ["regime_true", "regime_pred", "regime_match"]
    return cols


def evaluate(model: EncoderModel, trajectories: Sequence[Trajectory]) -> Evaluation:
    """Per-trajectory MLP and baseline errors plus ``mean``/``max`` summary rows."""
    if not trajectories:
        raise ValueError("cannot evaluate on an empty dataset")
    kind = model.kind
    preds = predict_many(model, trajectories)
    rows, reports, matches = [], [], []
    for i, (traj, pred) in enumerate(zip(trajectories, preds)):
        mlp = AlgebraVector(kind, pred)
        base = estimate_mean_increment(traj)
        rep = compare(mlp, base, traj.true_xi)
        reports.append(rep)
        row = [i, *traj.true_xi.coords, *mlp.coords, *base.coords, *rep.model_abs, *rep.baseline_abs,
               rep.model_euclid, rep.baseline_euclid]
        if kind is GroupKind.SL2R:
            rt, rp = classify_regime(traj.true_xi), classify_regime(mlp)
            matches.append(rt is rp)
            row += [rt.value, rp.value, int(rt is rp)]
        rows.append(row)
    s = summarize(reports)
    blank = [""] * (3 * kind.algebra_dim)
    mean_row = ["mean", *blank, *s.model_mean, *s.baseline_mean, s.model_euclid_mean, s.baseline_euclid_mean]
    max_row = ["max", *blank, *s.model_max, *s.baseline_max,
               max(r.model_euclid for r in reports), max(r.baseline_euclid for r in reports)]
    rate = None
    if kind is GroupKind.SL2R:
        rate = float(np.mean(matches))
        mean_row += ["", "", rate]
        max_row += ["", "", ""]
    rows += [mean_row, max_row]
    return Evaluation(kind, evaluation_header(kind), rows, s.model_mean, s.model_max, s.baseline_mean,
                      s.baseline_max, rate)


@dataclass
class Figure:
    svg: str
    csv_header: list[str]
    csv_rows: list[list]
    notes: list[str] = field(default_factory=list)


def loss_figure(rows: Sequence[dict]) -> Figure:
    """Loss curves from a ``epoch,train_loss,val_loss`` table, plotted on a log10 axis."""
    epochs = [int(r["epoch"]) for r in rows]
    series = []
    for col in ("train_loss", "val_loss"):
        vals = [float(r[col]) for r in rows if r.get(col) not in (None, "")]
        if len(vals) == len(epochs) and vals:
            series.append((col, epochs, [math.log10(max(v, 1e-300)) for v in vals]))
    svg = line_chart(series, "MSE loss", "epoch", "log10 loss")
    out_rows = [[r["epoch"], r["train_loss"], r.get("val_loss", "")] for r in rows]
    return Figure(svg, ["epoch", "train_loss", "val_loss"], out_rows)


def generator_figure(truth: np.ndarray, predicted: np.ndarray) -> Figure:
    """Scatter of estimated against true generator coordinates, one colour per component."""
    truth = np.atleast_2d(truth)
    predicted = np.atleast_2d(predicted)
    series = [(f"component {j}", truth[:, j].tolist(), predicted[:, j].tolist()) for j in range(truth.shape[1])]
    svg = scatter_chart(series, "Estimated vs true generator", "true", "estimated")
    rows = [[i, j, truth[i, j], predicted[i, j]] for i in range(truth.shape[0]) for j in range(truth.shape[1])]
    return Figure(svg, ["trajectory", "component", "true", "predicted"], rows)


def generator_from_report(rows: Sequence[dict]) -> tuple[np.ndarray, np.ndarray]:
    data = [r for r in rows if r["index"] not in ("mean", "max")]
    d = sum(1 for k in rows[0] if k.startswith("true_")) if rows else 0
    truth = np.array([[float(r[f"true_{j}"]) for j in range(d)] for r in data])
    pred = np.array([[float(r[f"mlp_{j}"]) for j in range(d)] for r in data])
    return truth.reshape(-1, d), pred.reshape(-1, d)


def _rotation(kind: GroupKind, m: np.ndarray) -> np.ndarray:
    return m if kind is GroupKind.SO3 else m[:3, :3]


def trajectory_figure(traj: Trajectory, predicted: AlgebraVector) -> Figure:
    """Overlay the observed poses with poses regenerated from the predicted generator."""
    kind = traj.kind
    config = SamplingConfig(kind, bound_a=0.0, dt=traj.dt, steps=traj.steps)
    pred_traj = generate_clean(predicted, config)
    times = [t * traj.dt for t in range(traj.steps + 1)]
    true_m = traj.pose_array()
    pred_m = pred_traj.pose_array()
    notes = []
    if kind is GroupKind.SE2:
        series = [
            ("true path", true_m[:, 0, 2].tolist(), true_m[:, 1, 2].tolist()),
            ("predicted path", pred_m[:, 0, 2].tolist(), pred_m[:, 1, 2].tolist()),
        ]
        svg = line_chart(series, "Predicted vs true trajectory (SE(2))", "x", "y")
        header = ["t", "true_x", "true_y", "pred_x", "pred_y"]
        rows = [[times[t], true_m[t, 0, 2], true_m[t, 1, 2], pred_m[t, 0, 2], pred_m[t, 1, 2]]
                for t in range(len(times))]
    elif kind in (GroupKind.SO3, GroupKind.SE3):
        zt = np.stack([_rotation(kind, m)[:, 2] for m in true_m])
        zp = np.stack([_rotation(kind, m)[:, 2] for m in pred_m])
        axes = "xyz"
        series = [(f"true z.{axes[j]}", times, zt[:, j].tolist()) for j in range(3)]
        series += [(f"pred z.{axes[j]}", times, zp[:, j].tolist()) for j in range(3)]
        svg = line_chart(series, f"z-axis direction ({kind.tag.upper()})", "time [s]", "component")
        angles = []
        for a, b in zip(true_m, pred_m):
            rel = _rotation(kind, a).T @ _rotation(kind, b)
            angles.append(math.acos(min(1.0, max(-1.0, (np.trace(rel) - 1.0) / 2.0))))
        notes.append(f"max angular deviation: {max(angles):.6g} rad")
        header = ["t", "true_zx", "true_zy", "true_zz", "pred_zx", "pred_zy", "pred_zz", "angle"]
        rows = [[times[t], *zt[t], *zp[t], angles[t]] for t in range(len(times))]
    else:
        names = ("a11", "a12", "a21", "a22")
        flat_t = true_m.reshape(len(times), 4)
        flat_p = pred_m.reshape(len(times), 4)
        series = [(f"true {n}", times, flat_t[:, j].tolist()) for j, n in enumerate(names)]
        series += [(f"pred {n}", times, flat_p[:, j].tolist()) for j, n in enumerate(names)]
        svg = line_chart(series, "Matrix flow (SL(2,R))", "time [s]", "entry")
        header = ["t", *(f"true_{n}" for n in names), *(f"pred_{n}" for n in names)]
        rows = [[times[t], *flat_t[t], *flat_p[t]] for t in range(len(times))]
    return Figure(svg, header, rows, notes)
