"""On-disk formats.

``.ljd`` trajectory datasets
    Line-delimited JSON. Line 1 is the header object with exactly the keys
    ``format_version, group, dt, steps, bound_a, noise_sigma, seed, count``.
    Each following line is one trajectory: ``{"xi": [...], "poses": [[...],
    ...], "increments": [[...], ...]}`` with poses flattened row-major.

``.lem`` encoder checkpoints
    A single JSON object holding the group, layer dimensions, row-major
    weights and the frozen normalization statistics.

Floats are written with Python's shortest round-trip ``repr``, so reading a
file back reproduces every binary64 value exactly and identical inputs give
byte-identical files.
"""

from __future__ import annotations

import csv
import json
import os
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DataFormatError, DimensionError, LieRecError
from .encoder import PARAM_NAMES, EncoderModel, TrainReport
from .groups import AlgebraVector, GroupElement, GroupKind
from .preprocessing import NormalizationStats, to_increments
from .synthesis import SamplingConfig, Trajectory

FORMAT_VERSION = 1
HEADER_KEYS = ("format_version", "group", "dt", "steps", "bound_a", "noise_sigma", "seed", "count")


def _dumps(obj) -> str:
    return json.dumps(obj, separators=(",", ":"), allow_nan=False)


def _floats(a) -> list:
    return np.asarray(a, dtype=np.float64).tolist()


@dataclass(frozen=True)
class DatasetHeader:
    group: GroupKind
    dt: float
    steps: int
    bound_a: float | None
    noise_sigma: float
    seed: int | None
    count: int
    format_version: int = FORMAT_VERSION

    def to_json(self) -> dict:
        return {
            "format_version": self.format_version,
            "group": self.group.tag,
            "dt": float(self.dt),
            "steps": int(self.steps),
            "bound_a": None if self.bound_a is None else float(self.bound_a),
            "noise_sigma": float(self.noise_sigma),
            "seed": self.seed,
            "count": int(self.count),
        }


def _header_for(trajs: Sequence[Trajectory], config: SamplingConfig | None) -> DatasetHeader:
    if trajs:
        first = trajs[0]
        for i, t in enumerate(trajs):
            if t.kind is not first.kind or t.dt != first.dt or t.steps != first.steps:
                raise DataFormatError(f"trajectory {i} differs in group, dt or steps from trajectory 0")
    if config is not None:
        if trajs and (config.kind is not trajs[0].kind or config.dt != trajs[0].dt or config.steps != trajs[0].steps):
            raise DataFormatError("sampling config does not match the trajectories")
        return DatasetHeader(config.kind, config.dt, config.steps, config.bound_a, config.noise_sigma, config.seed, len(trajs))
    if not trajs:
        raise DataFormatError("writing an empty dataset requires a sampling config for the header")
    return DatasetHeader(trajs[0].kind, trajs[0].dt, trajs[0].steps, None, trajs[0].noise_sigma, None, len(trajs))


def dataset_lines(trajs: Sequence[Trajectory], config: SamplingConfig | None = None) -> Iterable[str]:
    yield _dumps(_header_for(trajs, config).to_json())
    for t in trajs:
        yield _dumps({
            "xi": _floats(t.true_xi.coords),
            "poses": [_floats(p.matrix.reshape(-1)) for p in t.poses],
            "increments": _floats(to_increments(t).increments),
        })


def write_dataset(trajs: Sequence[Trajectory], path, config: SamplingConfig | None = None) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for line in dataset_lines(trajs, config):
            fh.write(line + "\n")


def _parse_header(line: str) -> DatasetHeader:
    try:
        raw = json.loads(line)
    except json.JSONDecodeError as exc:
        raise DataFormatError(f"line 1: header is not valid JSON ({exc.msg})") from exc
    if not isinstance(raw, dict):
        raise DataFormatError("line 1: header must be a JSON object")
    missing = [k for k in HEADER_KEYS if k not in raw]
    if missing:
        raise DataFormatError(f"line 1: header is missing {', '.join(missing)}")
    extra = sorted(set(raw) - set(HEADER_KEYS))
    if extra:
        raise DataFormatError(f"line 1: unexpected header keys {', '.join(extra)}")
    if raw["format_version"] != FORMAT_VERSION:
        raise DataFormatError(f"unsupported dataset format_version {raw['format_version']!r}")
    try:
        return DatasetHeader(
            GroupKind.parse(raw["group"]),
            float(raw["dt"]),
            int(raw["steps"]),
            None if raw["bound_a"] is None else float(raw["bound_a"]),
            float(raw["noise_sigma"]),
            None if raw["seed"] is None else int(raw["seed"]),
            int(raw["count"]),
        )
    except (TypeError, ValueError) as exc:
        raise DataFormatError(f"line 1: bad header value ({exc})") from exc


def _parse_record(line: str, lineno: int, header: DatasetHeader) -> Trajectory:
    kind = header.group
    n, d = kind.ambient_dim, kind.algebra_dim
    where = f"line {lineno}"
    try:
        rec = json.loads(line)
        xi = np.array(rec["xi"], dtype=np.float64)
        poses = np.array(rec["poses"], dtype=np.float64)
        inc = np.array(rec["increments"], dtype=np.float64)
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise DataFormatError(f"{where}: malformed record ({exc})") from exc
    if inc.ndim != 2 or inc.shape[0] != header.steps or inc.shape[1] != d:
        raise DataFormatError(f"{where}: expected {header.steps} increments of length {d}, got shape {inc.shape}")
    if poses.ndim != 2 or poses.shape != (header.steps + 1, n * n):
        raise DataFormatError(f"{where}: expected {header.steps + 1} poses of {n * n} entries, got shape {poses.shape}")
    try:
        elements = tuple(GroupElement(kind, p.reshape(n, n)) for p in poses)
        true_xi = AlgebraVector(kind, xi)
    except (LieRecError, ValueError) as exc:
        raise DataFormatError(f"{where}: {exc}") from exc
    return Trajectory(kind, header.dt, elements, true_xi, header.noise_sigma)


def load_dataset(path) -> tuple[DatasetHeader, list[Trajectory]]:
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise DataFormatError(f"{path}: empty file, header missing")
    header = _parse_header(lines[0])
    trajs = [_parse_record(line, i + 2, header) for i, line in enumerate(lines[1:]) if line.strip()]
    if len(trajs) != header.count:
        raise DataFormatError(f"header declares {header.count} records, file has {len(trajs)}")
    return header, trajs


def read_dataset(path) -> list[Trajectory]:
    return load_dataset(path)[1]


# -- checkpoints -----------------------------------------------------------------------


def model_to_json(model: EncoderModel) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "group": model.kind.tag,
        "input_dim": model.input_dim,
        "hidden_dims": list(model.hidden_dims),
        "output_dim": model.output_dim,
        "stats": {
            "mean": _floats(model.stats.mean),
            "sigma": float(model.stats.sigma),
            "count": int(model.stats.count),
        },
        "params": {
            k: {"shape": list(model.params[k].shape), "data": _floats(model.params[k].reshape(-1))}
            for k in PARAM_NAMES
        },
    }


def write_model(model: EncoderModel, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(_dumps(model_to_json(model)) + "\n")


def model_from_json(raw: dict) -> EncoderModel:
    for key in ("format_version", "group", "input_dim", "hidden_dims", "output_dim", "params"):
        if key not in raw:
            raise DataFormatError(f"checkpoint is missing {key!r}")
    if raw["format_version"] != FORMAT_VERSION:
        raise DataFormatError(f"unsupported checkpoint format_version {raw['format_version']!r}")
    if raw.get("stats") is None:
        raise DataFormatError("checkpoint has no normalization stats; inference needs the frozen mean and sigma")
    try:
        kind = GroupKind.parse(raw["group"])
        stats = NormalizationStats(raw["stats"]["mean"], float(raw["stats"]["sigma"]), int(raw["stats"]["count"]))
        params = {}
        for k in PARAM_NAMES:
            entry = raw["params"][k]
            shape = tuple(int(s) for s in entry["shape"])
            params[k] = np.array(entry["data"], dtype=np.float64).reshape(shape)
    except (KeyError, TypeError, ValueError) as exc:
        raise DataFormatError(f"malformed checkpoint ({exc})") from exc
    h1, h2 = (int(h) for h in raw["hidden_dims"])
    declared = {
        "W1": (h1, int(raw["input_dim"])),
        "W2": (h2, h1),
        "W3": (int(raw["output_dim"]), h2),
    }
    for k, shape in declared.items():
        if params[k].shape != shape:
            raise DataFormatError(f"checkpoint {k} has shape {params[k].shape}, declared dims imply {shape}")
    try:
        return EncoderModel(kind, stats, params)
    except DimensionError as exc:
        raise DataFormatError(f"inconsistent checkpoint: {exc}") from exc


def read_model(path) -> EncoderModel:
    with open(path, encoding="utf-8") as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise DataFormatError(f"{path}: checkpoint is not valid JSON ({exc.msg})") from exc
    return model_from_json(raw)


# -- CSV reports ---------------------------------------------------------------------------


def write_csv(path, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])


def read_csv(path) -> list[dict[str, str]]:
    with open(path, encoding="utf-8", newline="") as fh:
        return list(csv.DictReader(fh))


def write_loss_csv(report: TrainReport, path) -> None:
    rows = []
    for i, tr in enumerate(report.train_loss):
        va = report.val_loss[i] if i < len(report.val_loss) else ""
        rows.append((i + 1, tr, va))
    write_csv(path, ("epoch", "train_loss", "val_loss"), rows)


def default_sidecar(path, suffix: str) -> str:
    root, _ = os.path.splitext(str(path))
    return root + suffix
