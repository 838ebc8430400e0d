"""Command-line front end.

Subcommands: gen-data, train, ensemble, curve, interpolate, correlate, sweep.
Exit codes: 0 success, 2 usage/config/input errors, 3 numerical divergence,
4 I/O and file-format errors. Every emitted CSV carries a header row.
"""
from __future__ import annotations

import argparse
import csv
import os
import sys

from . import data as data_mod
from .analysis import default_lambda_grid, interpolate, softmax_correlation
from .config import build_datasets, parse_config, resolve_train_config
from .data import load_csv, save_csv
from .ensemble import ensemble_eval, error_over_time, predict
from .errors import (
    ConfigError,
    ConsistencyError,
    DivergenceError,
    FormatError,
    InputError,
    StorageError,
)
from .store import load_run
from .trainer import save_run, train

TRAIN_CSV_NAME = "train.csv"
TEST_CSV_NAME = "test.csv"


def _write_rows(out, header, rows):
    """Write CSV rows to a file path, or stdout when out is None."""

    def emit(fh):
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow(row)

    if out is None:
        emit(sys.stdout)
    else:
        with open(out, "w", newline="") as fh:
            emit(fh)


def _fmt(value) -> str:
    return repr(float(value))


def cmd_gen_data(args) -> int:
    if args.source == "two_moons":
        dataset = data_mod.gen_two_moons(args.n, args.noise, args.seed)
    elif args.source == "spirals":
        dataset = data_mod.gen_spirals(args.n, args.turns, args.noise, args.seed)
    else:
        dataset = data_mod.gen_blobs(args.n, args.classes, args.spread, args.seed)
    save_csv(dataset, args.out)
    print(f"wrote {len(dataset)} examples to {args.out}")
    return 0


def cmd_train(args) -> int:
    cfg = parse_config(args.config)
    train_set, test_set = build_datasets(cfg)
    config = resolve_train_config(cfg, len(train_set))
    manifest = train(config, train_set)
    manifest_path = save_run(manifest, cfg.output_dir)
    save_csv(train_set, os.path.join(cfg.output_dir, TRAIN_CSV_NAME))
    save_csv(test_set, os.path.join(cfg.output_dir, TEST_CSV_NAME))
    print(f"run complete: {len(manifest.snapshots)} snapshots in {cfg.output_dir}")
    print(f"manifest: {manifest_path}")
    return 0


def cmd_ensemble(args) -> int:
    records = load_run(args.manifest)
    dataset = load_csv(args.data)
    if args.m is not None:
        result = ensemble_eval(records, dataset, args.m, args.order)
        header = ["m", "ensemble_error"] + [
            f"member_error_{i}" for i in range(1, result.m + 1)
        ]
        rows = [[result.m, _fmt(result.ensemble_error)] + [_fmt(e) for e in result.member_errors]]
    else:
        header = ["m", "ensemble_error"]
        rows = [
            [m, _fmt(ensemble_eval(records, dataset, m, args.order).ensemble_error)]
            for m in range(1, len(records) + 1)
        ]
    _write_rows(args.out, header, rows)
    return 0


def cmd_curve(args) -> int:
    records = load_run(args.manifest)
    dataset = load_csv(args.data)
    rows = [
        [k, _fmt(single), _fmt(ensembled)]
        for k, single, ensembled in error_over_time(records, dataset)
    ]
    _write_rows(args.out, ["k", "single_error", "ensemble_error"], rows)
    return 0


def _check_snapshot_index(i: int, count: int) -> None:
    if not 1 <= i <= count:
        raise InputError(f"snapshot index {i} outside valid range [1, {count}]")


def cmd_interpolate(args) -> int:
    records = load_run(args.manifest)
    dataset = load_csv(args.data)
    count = len(records)
    if args.pair is not None:
        pairs = [(args.pair[0], args.pair[1])]
    else:
        pairs = [(count, k) for k in range(1, count)]
        if not pairs:
            raise InputError("--against-final needs a run with at least two snapshots")
    grid = default_lambda_grid(args.points)
    os.makedirs(args.out, exist_ok=True)
    for i, j in pairs:
        _check_snapshot_index(i, count)
        _check_snapshot_index(j, count)
        curve = interpolate(
            records[i - 1].spec,
            records[i - 1].params,
            records[j - 1].params,
            dataset,
            grid,
            endpoints=(f"snapshot_{i}", f"snapshot_{j}"),
        )
        out = os.path.join(args.out, f"interp_{i:03d}_{j:03d}.csv")
        _write_rows(
            out,
            ["lambda", "test_error"],
            [[_fmt(lam), _fmt(err)] for lam, err in zip(curve.lambdas, curve.errors)],
        )
    print(f"wrote {len(pairs)} interpolation curve(s) to {args.out}")
    return 0


def cmd_correlate(args) -> int:
    records = load_run(args.manifest)
    dataset = load_csv(args.data)
    predictions = [
        predict(r.spec, r.params, dataset, source=f"snapshot_{r.cycle_index}") for r in records
    ]
    matrix = softmax_correlation(predictions)
    count = matrix.values.shape[0]
    os.makedirs(args.out, exist_ok=True)
    _write_rows(
        os.path.join(args.out, "corr_triples.csv"),
        ["i", "j", "corr"],
        [
            [i + 1, j + 1, _fmt(matrix.values[i, j])]
            for i in range(count)
            for j in range(count)
        ],
    )
    _write_rows(
        os.path.join(args.out, "corr_matrix.csv"),
        [f"s{j + 1}" for j in range(count)],
        [[_fmt(v) for v in row] for row in matrix.values],
    )
    print(f"wrote correlation files to {args.out}")
    return 0


def cmd_sweep(args) -> int:
    config_files = sorted(
        os.path.join(args.config_dir, name)
        for name in os.listdir(args.config_dir)
        if name.endswith(".cfg")
    )
    if not config_files:
        raise InputError(f"no .cfg files in {args.config_dir}")
    rows = []
    for path in config_files:
        cfg = parse_config(path)
        train_set, test_set = build_datasets(cfg)
        config = resolve_train_config(cfg, len(train_set))
        manifest = train(config, train_set)
        save_run(manifest, cfg.output_dir)
        save_csv(train_set, os.path.join(cfg.output_dir, TRAIN_CSV_NAME))
        save_csv(test_set, os.path.join(cfg.output_dir, TEST_CSV_NAME))
        m = len(manifest.snapshots)
        result = ensemble_eval(manifest.snapshots, test_set, m, "latest")
        name = os.path.splitext(os.path.basename(path))[0]
        rows.append([name, cfg.mode, cfg.epochs, m, _fmt(result.ensemble_error)])
        print(f"{name}: mode={cfg.mode} snapshots={m} ensemble_error={result.ensemble_error:.4f}")
    _write_rows(args.summary, ["config", "mode", "epochs", "m", "ensemble_error"], rows)
    print(f"summary: {args.summary}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="snapens",
        description="Train small dense nets with cyclic cosine restarts and ensemble the cycle-end snapshots.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-data", help="generate a synthetic dataset CSV")
    p.add_argument("--source", required=True, choices=("two_moons", "spirals", "blobs"))
    p.add_argument("--out", required=True)
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--noise", type=float, default=0.1)
    p.add_argument("--turns", type=float, default=2.0, help="spiral revolutions")
    p.add_argument("--classes", type=int, default=3, help="blob cluster count")
    p.add_argument("--spread", type=float, default=0.5, help="blob cluster sigma")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_gen_data)

    p = sub.add_parser("train", help="run one training config into its output directory")
    p.add_argument("config")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("ensemble", help="ensemble error for one m or a sweep over m")
    p.add_argument("--manifest", required=True)
    p.add_argument("--data", required=True, help="evaluation dataset CSV")
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--order", choices=("latest", "earliest"), default="latest")
    p.add_argument("--out", default=None, help="output CSV (default: stdout)")
    p.set_defaults(func=cmd_ensemble)

    p = sub.add_parser("curve", help="single vs growing-ensemble error over snapshots")
    p.add_argument("--manifest", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("interpolate", help="test error along lines between snapshots")
    p.add_argument("--manifest", required=True)
    p.add_argument("--data", required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--pair", nargs=2, type=int, metavar=("I", "J"))
    group.add_argument("--against-final", action="store_true")
    p.add_argument("--points", type=int, default=51)
    p.add_argument("--out", required=True, help="output directory for curve CSVs")
    p.set_defaults(func=cmd_interpolate)

    p = sub.add_parser("correlate", help="pairwise softmax correlation between snapshots")
    p.add_argument("--manifest", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_correlate)

    p = sub.add_parser("sweep", help="run every .cfg in a directory and join the results")
    p.add_argument("config_dir")
    p.add_argument("--summary", default="summary.csv")
    p.set_defaults(func=cmd_sweep)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, InputError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except DivergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (FormatError, ConsistencyError, StorageError, OSError) as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    raise SystemExit(main())
