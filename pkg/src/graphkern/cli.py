"""Command-line interface: ``inspect``, ``gram`` and ``cv`` subcommands."""
from __future__ import annotations

import argparse
import itertools
import json
import sys

import numpy as np

from .cv import DEFAULT_C_GRID, kfold_cv
from .exceptions import DataError, GraphKernelError, NumericError
from .gram import KERNEL_IDS, RBF_SIGMA_GRID, GramMatrix, compute_gram, rbf_values, scale_gram
from .io import dataset_stats, parse_dataset, write_gram

DEFAULT_RBF_SIGMA = 1.0

# CLI dest -> kernel descriptor key
PARAM_FLAGS = {
    "h": ("--h", int, "WL iterations or tree depth"),
    "gamma": ("--gamma", float, "GRW decay (absolute)"),
    "gamma_frac": ("--gamma-frac", float, "GRW decay as a fraction of 1/max product degree"),
    "beta": ("--beta", float, "exponential walk kernel parameter"),
    "steps": ("--steps", int, "N-step walk length"),
    "depth": ("--depth", int, "fingerprint path depth"),
    "lambda": ("--lambda", float, "tree-pattern weight"),
    "stop_prob": ("--stop-prob", float, "marginalized kernel stopping probability"),
    "morgan": ("--morgan", int, "Morgan index iterations for marginalized_nt"),
    "variant": ("--variant", str, "tree-pattern weighting: size or branch"),
    "tree_set": ("--tree-set", str, "tree-pattern set: balanced or up_to_depth"),
    "base": ("--base", str, "WL base kernel: vh, eh or sp"),
    "r": ("--r", int, "hashed fingerprint length"),
    "bits": ("--bits", int, "bits set per hashed feature (1 or 4)"),
    "c": ("--c", float, "hybrid kernel mixing parameter"),
}
BOOL_FLAGS = {
    "no_tottering": "--no-tottering",
    "uniform_start": "--uniform-start",
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}\n{self.format_usage()}")


def _add_kernel_args(p):
    p.add_argument("dataset", help="directory holding DS_A.txt and friends")
    p.add_argument("--kernel", choices=KERNEL_IDS, help="kernel id")
    for dest, (flag, typ, text) in PARAM_FLAGS.items():
        p.add_argument(flag, dest=dest, type=typ, default=None, help=text)
    for dest, flag in BOOL_FLAGS.items():
        p.add_argument(flag, dest=dest, action="store_const", const=True, default=None)
    rbf = p.add_mutually_exclusive_group()
    rbf.add_argument("--sigma", type=float, default=None, help="compose with the graph RBF kernel at this sigma")
    rbf.add_argument("--rbf", action="store_const", const=True, default=None, help="compose with the graph RBF kernel")
    p.add_argument("--jobs", type=int, default=None, help="worker processes for pairwise kernels")
    p.add_argument("--config", default=None, help="JSON file with default values for any flag")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="graphkern", description="Graph kernels, Gram matrices and SVM cross-validation.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("inspect", help="print dataset statistics as JSON")
    p.add_argument("dataset")

    p = sub.add_parser("gram", help="compute and write a Gram matrix")
    _add_kernel_args(p)
    p.add_argument("--scale", action="store_const", const=True, default=None, help="min-max scale to [0, 1]")
    p.add_argument("--out", default=None, help="output file")
    p.add_argument("--format", choices=("csv", "binary"), default=None)

    p = sub.add_parser("cv", help="grid-searched k-fold cross-validation, report as JSON")
    _add_kernel_args(p)
    p.add_argument("--folds", type=int, default=None)
    p.add_argument("--C-grid", dest="C_grid", default=None, help="comma-separated C values")
    p.add_argument(
        "--param-grid", dest="param_grid", action="append", default=None,
        help="name=v1,v2,... (repeatable; cartesian product)",
    )
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--scheme", choices=("ovo", "ova"), default=None)
    p.add_argument("--no-scale", dest="no_scale", action="store_const", const=True, default=None)
    return parser


DEFAULTS = {"format": "csv", "folds": 10, "seed": 0, "scheme": "ovo", "jobs": 1}


def _merge_config(args):
    config = {}
    if getattr(args, "config", None):
        try:
            with open(args.config, encoding="utf-8") as fh:
                config = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot load config {args.config}: {exc}") from exc
        if not isinstance(config, dict):
            raise UsageError("config file must hold a JSON object")
    for key, value in {**DEFAULTS, **config}.items():
        key = key.replace("-", "_")
        if hasattr(args, key) and getattr(args, key) is None:
            setattr(args, key, value)
    return args


def _descriptor(args) -> dict:
    if args.kernel is None:
        raise UsageError("--kernel is required")
    desc = {"kernel": args.kernel}
    for dest in list(PARAM_FLAGS) + list(BOOL_FLAGS):
        value = getattr(args, dest, None)
        if value is not None:
            desc[dest] = value
    return desc


def _parse_value(text: str):
    for typ in (int, float):
        try:
            return typ(text)
        except ValueError:
            pass
    return text


def _param_grid(entries) -> list:
    if not entries:
        return [{}]
    names, choices = [], []
    for entry in entries:
        name, sep, values = entry.partition("=")
        if not sep or not values:
            raise UsageError(f"bad --param-grid entry {entry!r}; expected name=v1,v2")
        names.append(name.replace("-", "_"))
        choices.append([_parse_value(v) for v in values.split(",")])
    return [dict(zip(names, combo)) for combo in itertools.product(*choices)]


def _cmd_inspect(args) -> int:
    ds = parse_dataset(args.dataset)
    print(json.dumps(dataset_stats(ds), sort_keys=True))
    return 0


def _cmd_gram(args) -> int:
    if not args.out:
        raise UsageError("--out is required")
    ds = parse_dataset(args.dataset)
    desc = _descriptor(args)
    if args.sigma is not None or args.rbf:
        desc["rbf_sigma"] = args.sigma if args.sigma is not None else DEFAULT_RBF_SIGMA
    m = compute_gram(ds.graphs, desc, n_jobs=args.jobs)
    if args.scale:
        m = scale_gram(m)
    write_gram(m, args.out, args.format)
    return 0


def _cmd_cv(args) -> int:
    ds = parse_dataset(args.dataset)
    base = _descriptor(args)
    try:
        c_grid = [float(c) for c in args.C_grid.split(",")] if args.C_grid else list(DEFAULT_C_GRID)
    except ValueError:
        raise UsageError(f"bad --C-grid {args.C_grid!r}") from None
    sigmas = [args.sigma] if args.sigma is not None else (list(RBF_SIGMA_GRID) if args.rbf else [None])
    grams = []
    for params in _param_grid(args.param_grid):
        m = compute_gram(ds.graphs, {**base, **params}, n_jobs=args.jobs)
        for sigma in sigmas:
            if sigma is None:
                grams.append((params, m))
            else:
                rbf = GramMatrix(rbf_values(m.values, sigma), m.graph_ids, {**m.kernel_descriptor, "rbf_sigma": sigma})
                grams.append(({**params, "rbf_sigma": sigma}, rbf))
    report = kfold_cv(grams, np.asarray(ds.class_labels), args.folds, c_grid, args.seed, not args.no_scale, args.scheme)
    out = report.to_dict()
    out["kernel"] = base
    print(json.dumps(out, sort_keys=True))
    return 0


COMMANDS = {"inspect": _cmd_inspect, "gram": _cmd_gram, "cv": _cmd_cv}


def run_cli(argv=None) -> int:
    """Run one command; returns 0 on success, 1 usage error, 2 data error, 3 numeric error."""
    try:
        args = build_parser().parse_args(argv)
        args = _merge_config(args)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(str(exc).rstrip(), file=sys.stderr)
        return 1
    except NumericError as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return 3
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 2
    except GraphKernelError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
