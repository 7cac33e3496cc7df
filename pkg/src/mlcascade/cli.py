"""Command-line front end: generate datasets, run benchmarks, train and predict.

Exit codes: 0 success, 1 usage error, 2 data error, 3 internal error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .data import (
    CsvFormatError,
    Dataset,
    StandardizationParams,
    SynthNetSpec,
    apply_standardizer,
    fit_standardizer,
    gen_logical,
    gen_synthetic,
    load_csv,
    save_csv,
)
from .evaluate import MethodFailure, run_experiment
from .logistic import TrainConfig
from .methods import (
    METHOD_NAMES,
    MethodConfig,
    load_model,
    save_model,
    train_method,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_INTERNAL = 3

DEFAULT_SEED = 1


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad flags; this project reserves 2 for data errors.
    def error(self, message: str):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _atomic_write(path: Path, text: str) -> None:
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, path)


def _atomic_file(path: Path, writer) -> None:
    """Run writer(tmp_path), then move the result into place."""
    tmp = path.with_name(path.name + ".tmp")
    writer(tmp)
    os.replace(tmp, path)


def _write_manifest(csv_path: Path, manifest: dict) -> Path:
    manifest_path = csv_path.with_suffix(".manifest.json")
    _atomic_write(manifest_path, json.dumps(manifest, sort_keys=True, indent=2) + "\n")
    return manifest_path


def _method_config(args) -> MethodConfig:
    base = TrainConfig(
        learning_rate=args.lr,
        epochs=args.epochs,
        l2_penalty=args.l2,
        seed=args.seed,
    )
    return MethodConfig(
        synthetic_count=args.h,
        indicator_count=args.hprime,
        subset_size=args.subset_size,
        base=base,
        seed=args.seed,
    )


def _load_dataset(args) -> tuple[str, Dataset]:
    source = args.dataset
    if source == "logical":
        return "logical", gen_logical(args.n if args.n is not None else 20)
    if source == "synthetic":
        spec = SynthNetSpec(
            D=args.d,
            L=args.l,
            N=args.n if args.n is not None else 2000,
            hidden_units=args.hidden,
            seed=args.gen_seed,
        )
        return "synthetic", gen_synthetic(spec)
    path = Path(source)
    if path.suffix.lower() != ".csv":
        raise UsageError(
            f"unknown dataset source {source!r}: expected 'logical', 'synthetic' or a .csv path"
        )
    if args.label_count is None:
        raise UsageError("--label-count is required for CSV datasets")
    try:
        ds = load_csv(path, args.label_count, labels_last=not args.labels_first)
    except FileNotFoundError:
        raise DataError(f"dataset file not found: {path}") from None
    return path.stem, ds


def cmd_gen(args) -> int:
    out = Path(args.out)
    if args.kind == "logical":
        n = args.n if args.n is not None else 20
        dataset = gen_logical(n)
        manifest = {"kind": "logical", "n": n}
    else:
        spec = SynthNetSpec(
            D=args.d,
            L=args.l,
            N=args.n if args.n is not None else 2000,
            hidden_units=args.hidden,
            seed=args.seed,
        )
        dataset = gen_synthetic(spec)
        manifest = {
            "kind": "synthetic",
            "n": spec.N,
            "d": spec.D,
            "l": spec.L,
            "hidden": spec.hidden_units,
            "seed": spec.seed,
        }
    _atomic_file(out, lambda p: save_csv(dataset, p))
    manifest_path = _write_manifest(out, manifest)
    print(f"wrote {out} ({dataset.n_rows} rows, {dataset.n_features} features, "
          f"{dataset.n_labels} labels) and {manifest_path}")
    return EXIT_OK


def _parse_methods(raw: str) -> list[str]:
    names = [m.strip() for m in raw.split(",") if m.strip()]
    if not names:
        raise UsageError("--methods must list at least one method")
    for m in names:
        if m not in METHOD_NAMES:
            raise UsageError(f"unknown method {m!r}; expected one of {', '.join(METHOD_NAMES)}")
    return names


def cmd_bench(args) -> int:
    if args.iters < 1:
        raise UsageError("--iters must be >= 1")
    if not 0.0 < args.split < 1.0:
        raise UsageError("--split must be strictly between 0 and 1")
    name, dataset = _load_dataset(args)
    if args.name:
        name = args.name
    methods = _parse_methods(args.methods)
    cfg = _method_config(args)
    report = run_experiment(
        datasets=[(name, dataset)],
        methods=[(m, cfg) for m in methods],
        iterations=args.iters,
        split_fraction=args.split,
        master_seed=args.seed,
    )
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    _atomic_write(out_dir / f"{name}-exactmatch.csv", report.metric_csv("exact"))
    _atomic_write(out_dir / f"{name}-hamming.csv", report.metric_csv("hamming"))
    _atomic_write(out_dir / f"{name}-report.txt", report.table_text())
    print(report.table_text())
    print(f"report files written to {out_dir}")
    return EXIT_OK


def cmd_train(args) -> int:
    _, dataset = _load_dataset(args)
    if args.method not in METHOD_NAMES:
        raise UsageError(
            f"unknown method {args.method!r}; expected one of {', '.join(METHOD_NAMES)}"
        )
    if dataset.n_labels == 0:
        raise DataError("training data has no label columns")
    scaler_doc = None
    if not args.no_standardize:
        params = fit_standardizer(dataset)
        dataset = apply_standardizer(params, dataset)
        scaler_doc = {"mean": params.mean.tolist(), "std": params.std.tolist()}
    model = train_method(args.method, dataset, _method_config(args))
    _atomic_file(
        Path(args.out),
        lambda p: save_model(
            model,
            p,
            feature_names=dataset.feature_names,
            label_names=dataset.label_names,
            standardizer=scaler_doc,
        ),
    )
    print(f"trained {args.method} on {dataset.n_rows} rows; model saved to {args.out}")
    return EXIT_OK


def cmd_predict(args) -> int:
    try:
        model, meta = load_model(args.model)
    except FileNotFoundError:
        raise DataError(f"model file not found: {args.model}") from None
    try:
        data = load_csv(args.data, args.label_count, labels_last=not args.labels_first)
    except FileNotFoundError:
        raise DataError(f"data file not found: {args.data}") from None
    if data.n_features != model.input_dim:
        raise DataError(
            f"model expects {model.input_dim} features but data has {data.n_features}"
        )
    if meta.get("standardizer"):
        params = StandardizationParams(
            meta["standardizer"]["mean"], meta["standardizer"]["std"]
        )
        data = apply_standardizer(params, data)
    preds = model.predict(data.X)
    label_names = meta.get("label_names") or [f"y{j + 1}" for j in range(preds.shape[1])]
    lines = [",".join(label_names)]
    for row in preds:
        lines.append(",".join(str(int(v)) for v in row))
    _atomic_write(Path(args.out), "\n".join(lines) + "\n")
    print(f"wrote {preds.shape[0]} prediction rows to {args.out}")
    return EXIT_OK


def _add_dataset_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--dataset", required=True,
                   help="'logical', 'synthetic', or a path to a CSV file")
    p.add_argument("--label-count", type=int, default=None,
                   help="number of label columns in a CSV dataset")
    p.add_argument("--labels-first", action="store_true",
                   help="labels occupy the leading CSV columns instead of the trailing ones")
    p.add_argument("--n", type=int, default=None, help="rows for a generated dataset")
    p.add_argument("--d", type=int, default=10, help="features for the synthetic generator")
    p.add_argument("--l", type=int, default=10, help="labels for the synthetic generator")
    p.add_argument("--hidden", type=int, default=100,
                   help="hidden units for the synthetic generator (0 = linear)")
    p.add_argument("--gen-seed", type=int, default=DEFAULT_SEED,
                   help="seed for a generated dataset")


def _add_method_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=DEFAULT_SEED, help="master seed")
    p.add_argument("--h", type=int, default=None,
                   help="synthetic label count (default: per-method)")
    p.add_argument("--hprime", type=int, default=None,
                   help="label-subset indicator count (default: 2x labels)")
    p.add_argument("--subset-size", type=int, default=3,
                   help="labels per indicator subset")
    p.add_argument("--lr", type=float, default=0.1, help="base learner step size")
    p.add_argument("--epochs", type=int, default=1000, help="base learner epochs")
    p.add_argument("--l2", type=float, default=1e-4, help="base learner L2 penalty")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mlcascade",
                     description="Multi-label classification benchmark toolkit")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p_gen = sub.add_parser("gen", help="generate a dataset CSV plus a manifest")
    p_gen.add_argument("kind", choices=["logical", "synthetic"])
    p_gen.add_argument("--n", type=int, default=None, help="number of rows")
    p_gen.add_argument("--d", type=int, default=10)
    p_gen.add_argument("--l", type=int, default=10)
    p_gen.add_argument("--hidden", type=int, default=100)
    p_gen.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p_gen.add_argument("--out", required=True, help="output CSV path")
    p_gen.set_defaults(func=cmd_gen)

    p_bench = sub.add_parser("bench", help="run the shuffled multi-iteration benchmark")
    _add_dataset_flags(p_bench)
    p_bench.add_argument("--methods", default=",".join(METHOD_NAMES),
                         help="comma list from: " + ",".join(METHOD_NAMES))
    p_bench.add_argument("--iters", type=int, default=10)
    p_bench.add_argument("--split", type=float, default=0.6,
                         help="train fraction of each shuffled split")
    _add_method_flags(p_bench)
    p_bench.add_argument("--name", default=None, help="report name (default: dataset name)")
    p_bench.add_argument("--out", required=True, help="output directory for report files")
    p_bench.set_defaults(func=cmd_bench)

    p_train = sub.add_parser("train", help="train one method and save it as JSON")
    _add_dataset_flags(p_train)
    p_train.add_argument("--method", required=True)
    _add_method_flags(p_train)
    p_train.add_argument("--no-standardize", action="store_true",
                         help="train on raw features instead of standardized ones")
    p_train.add_argument("--out", required=True, help="output model path (JSON)")
    p_train.set_defaults(func=cmd_train)

    p_pred = sub.add_parser("predict", help="predict labels for a CSV with a saved model")
    p_pred.add_argument("--model", required=True, help="saved model JSON")
    p_pred.add_argument("--data", required=True, help="input CSV")
    p_pred.add_argument("--label-count", type=int, default=0,
                        help="label columns present in the input CSV (stripped)")
    p_pred.add_argument("--labels-first", action="store_true")
    p_pred.add_argument("--out", required=True, help="output predictions CSV")
    p_pred.set_defaults(func=cmd_predict)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.func(args)
    except UsageError as e:
        print(f"mlcascade: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (DataError, CsvFormatError, FileNotFoundError) as e:
        print(f"mlcascade: data error: {e}", file=sys.stderr)
        return EXIT_DATA
    except ValueError as e:
        print(f"mlcascade: data error: {e}", file=sys.stderr)
        return EXIT_DATA
    except MethodFailure as e:
        print(f"mlcascade: {e}", file=sys.stderr)
        return EXIT_INTERNAL
    except Exception as e:  # pragma: no cover - defensive
        print(f"mlcascade: internal error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
