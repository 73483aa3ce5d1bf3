"""Command-line entry point: ``lierec gen | train | eval | plot``.

Exit codes: 0 success, 1 usage error, 2 data/validation error, 3 numerical
failure. Failures print a single ``error:`` line on stderr.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import storage
from .encoder import TrainConfig, fit_encoder, predict_generator, predict_many
from .errors import (
    BranchCutError,
    DataFormatError,
    KindMismatchError,
    LieRecError,
    MembershipError,
    NumericalError,
)
from .groups import GroupKind
from .reports import evaluate, generator_figure, generator_from_report, loss_figure, trajectory_figure
from .synthesis import SamplingConfig, generate_dataset

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NUMERIC = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _default_seed() -> int:
    raw = os.environ.get("LIEREC_SEED")
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"LIEREC_SEED must be an integer, got {raw!r}") from None


def _hidden(text: str) -> tuple[int, int]:
    try:
        dims = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected two comma-separated widths, got {text!r}") from None
    if len(dims) != 2 or min(dims) < 1:
        raise argparse.ArgumentTypeError(f"expected two positive widths, got {text!r}")
    return dims


def _warn(msg: str) -> None:
    print(f"warning: {msg}", file=sys.stderr)


def _fmt_vec(v) -> str:
    return "[" + ", ".join(f"{x:.4g}" for x in v) + "]"


def cmd_gen(args) -> int:
    try:
        config = SamplingConfig(
            GroupKind.parse(args.group), args.bound, args.dt, args.steps, args.sigma, args.seed
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.n < 0:
        raise UsageError("--n must be >= 0")
    if args.n == 0:
        _warn("--n 0 writes an empty dataset")
    trajs = generate_dataset(config, args.n)
    storage.write_dataset(trajs, args.out, config)
    print(f"group={config.kind} n={args.n} steps={config.steps} dt={config.dt:g} sigma={config.noise_sigma:g} -> {args.out}")
    return EXIT_OK


def cmd_train(args) -> int:
    try:
        config = TrainConfig(
            learning_rate=args.lr,
            batch_size=args.batch,
            epochs=args.epochs,
            optimizer=args.optimizer,
            hidden_dims=args.hidden,
            seed=args.seed,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    header, trajs = storage.load_dataset(args.data)
    if not trajs:
        raise DataFormatError(f"{args.data} contains no trajectories")
    if args.epochs == 0:
        _warn("--epochs 0 writes the freshly initialized model")
    fit = fit_encoder(trajs, config)
    storage.write_model(fit.model, args.out)
    loss_path = args.loss_csv or storage.default_sidecar(args.out, ".loss.csv")
    storage.write_loss_csv(fit.report, loss_path)
    rep = fit.report
    final_train = rep.train_loss[-1] if rep.train_loss else rep.initial_train_loss
    msg = f"group={header.group} epochs={rep.epochs} train_loss={final_train:.4e}"
    if len(fit.val_index):
        val = [trajs[i] for i in fit.val_index]
        truth = np.stack([t.true_xi.coords for t in val])
        err = np.abs(predict_many(fit.model, val) - truth).mean(axis=0)
        final_val = rep.val_loss[-1] if rep.val_loss else rep.initial_val_loss
        msg += f" val_loss={final_val:.4e} val_mean_abs_err={_fmt_vec(err)}"
    print(f"{msg} -> {args.out}, {loss_path}")
    return EXIT_OK


def cmd_eval(args) -> int:
    model = storage.read_model(args.model)
    header, trajs = storage.load_dataset(args.data)
    if header.group is not model.kind:
        raise KindMismatchError(f"model is {model.kind} but dataset is {header.group}")
    if not trajs:
        raise DataFormatError(f"{args.data} contains no trajectories")
    ev = evaluate(model, trajs)
    storage.write_csv(args.out, ev.header, ev.rows)
    line = (
        f"n={len(trajs)} mlp_mean_abs_err={_fmt_vec(ev.model_mean)} "
        f"baseline_mean_abs_err={_fmt_vec(ev.baseline_mean)}"
    )
    if ev.regime_match_rate is not None:
        line += f" regime_match_rate={ev.regime_match_rate:.4f}"
    print(f"{line} -> {args.out}")
    return EXIT_OK


def cmd_plot(args) -> int:
    if args.kind == "loss":
        if not args.report:
            raise UsageError("--kind loss needs --report LOSS_CSV")
        fig = loss_figure(storage.read_csv(args.report))
    elif args.kind == "generator":
        if args.report:
            truth, pred = generator_from_report(storage.read_csv(args.report))
        elif args.model and args.data:
            model = storage.read_model(args.model)
            trajs = storage.read_dataset(args.data)
            truth = np.stack([t.true_xi.coords for t in trajs])
            pred = predict_many(model, trajs)
        else:
            raise UsageError("--kind generator needs --report EVAL_CSV or --model and --data")
        fig = generator_figure(truth, pred)
    else:
        if not (args.model and args.data):
            raise UsageError("--kind traj needs --model and --data")
        model = storage.read_model(args.model)
        trajs = storage.read_dataset(args.data)
        if not 0 <= args.index < len(trajs):
            raise UsageError(f"--index {args.index} out of range for {len(trajs)} trajectories")
        traj = trajs[args.index]
        fig = trajectory_figure(traj, predict_generator(model, traj))
    with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(fig.svg)
    csv_path = storage.default_sidecar(args.out, ".csv")
    storage.write_csv(csv_path, fig.csv_header, fig.csv_rows)
    for note in fig.notes:
        print(note)
    print(f"plot={args.kind} -> {args.out}, {csv_path}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lierec", description="Recover Lie algebra generators from sampled trajectories.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("gen", help="synthesize a trajectory dataset")
    g.add_argument("--group", required=True, choices=[k.tag for k in GroupKind])
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--steps", type=int, default=20)
    g.add_argument("--dt", type=float, default=0.1)
    g.add_argument("--bound", type=float, default=1.0)
    g.add_argument("--sigma", type=float, default=0.0)
    g.add_argument("--seed", type=int, default=None)
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_gen)

    t = sub.add_parser("train", help="fit normalization and train the encoder")
    t.add_argument("--data", required=True)
    t.add_argument("--out", required=True)
    t.add_argument("--hidden", type=_hidden, default=(64, 64))
    t.add_argument("--lr", type=float, default=1e-3)
    t.add_argument("--epochs", type=int, default=50)
    t.add_argument("--batch", type=int, default=64)
    t.add_argument("--seed", type=int, default=None)
    t.add_argument("--optimizer", choices=["adam", "sgd"], default="adam")
    t.add_argument("--loss-csv", default=None, help="defaults to <out>.loss.csv")
    t.set_defaults(func=cmd_train)

    e = sub.add_parser("eval", help="compare encoder and baseline against ground truth")
    e.add_argument("--model", required=True)
    e.add_argument("--data", required=True)
    e.add_argument("--out", required=True)
    e.set_defaults(func=cmd_eval)

    p = sub.add_parser("plot", help="render SVG figures with backing CSV")
    p.add_argument("--kind", required=True, choices=["loss", "traj", "generator"])
    p.add_argument("--report")
    p.add_argument("--model")
    p.add_argument("--data")
    p.add_argument("--index", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_plot)
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if getattr(args, "seed", 0) is None:
            args.seed = _default_seed()
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NumericalError, BranchCutError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (DataFormatError, MembershipError, KindMismatchError, LieRecError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
