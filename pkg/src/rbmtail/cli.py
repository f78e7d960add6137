"""Command-line interface: ``rbmtail {estimate,path,bench,process}``.

Exit codes: 0 success, 2 input error, 3 insufficient data, 4 bad spec.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

from . import __version__
from .core import DEFAULT_CAP, TailEstimate, k_of_s, make_sample, read_values
from .errors import (DomainError, EmptyAfterFiltering, FactorizationFailure, InputFormatError,
                     UnknownDistribution)
from .harness import BenchConfig, rows_to_csv, rows_to_json, run_benchmark
from .hill import gh_threshold, hill, hill_on_grid, round_k, smoohill, smoohill_on_grid
from .process import regret_study, study_csv
from .rbm import rbm_at_k, rbm_estimate, rbm_path

EXIT_INPUT = 2
EXIT_INSUFFICIENT = 3
EXIT_SPEC = 4


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _parse_threshold(text: str):
    """``auto``, ``k:<real>`` or ``s:<int>``."""
    if text == "auto":
        return None
    kind, _, value = text.partition(":")
    try:
        if kind == "k":
            k = float(value)
            if not (k > 0 and math.isfinite(k)):
                raise ValueError
            return ("k", k)
        if kind == "s":
            return ("s", int(value))
    except ValueError:
        pass
    raise argparse.ArgumentTypeError(f"threshold must be auto, k:<real> or s:<int>, got {text!r}")


def _csv_list(allowed):
    def parse(text):
        items = [t.strip() for t in text.split(",") if t.strip()]
        bad = [t for t in items if t not in allowed]
        if not items or bad:
            raise argparse.ArgumentTypeError(f"choose from {','.join(allowed)}")
        return items
    return parse


def _float_list(text):
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _load_sample(path, cap):
    try:
        values = read_values(path)
    except OSError as exc:
        raise CliError(EXIT_INPUT, f"cannot read {path}: {exc.strerror or exc}") from None
    except InputFormatError as exc:
        raise CliError(EXIT_INPUT, f"{path}: {exc}") from None
    if not values:
        raise CliError(EXIT_INSUFFICIENT, f"{path}: no observations")
    try:
        return make_sample(values, cap=cap)
    except EmptyAfterFiltering as exc:
        raise CliError(EXIT_INSUFFICIENT, str(exc)) from None


def _emit(text: str, out):
    if out:
        with open(out, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _estimate(smp, estimator, threshold):
    n = smp.n
    if estimator == "rbm":
        if threshold is None:
            return rbm_estimate(smp)
        if threshold[0] == "s":
            return rbm_at_k(smp, k_of_s(threshold[1], n))
        return rbm_at_k(smp, threshold[1])
    if threshold is None:
        if estimator == "hill":
            return gh_threshold(smp)
        raise CliError(EXIT_INPUT, "smoohill has no automatic threshold; pass --threshold k:<int>")
    if threshold[0] == "s":
        k = round_k(k_of_s(threshold[1], n), n)
    else:
        k = round_k(threshold[1], n)
    g = hill(smp, k) if estimator == "hill" else smoohill(smp, k)
    return TailEstimate(gamma_hat=g, k_hat=float(k))


def cmd_estimate(args):
    smp = _load_sample(args.file, args.cap)
    est = _estimate(smp, args.estimator, args.threshold)
    doc = {
        "estimator": args.estimator,
        "n_used": smp.n,
        "n_dropped": smp.n_dropped_nonpositive,
        "n_capped": smp.n_capped,
        "gamma_hat": est.gamma_hat,
        "k_hat": est.k_hat,
        "s_hat": est.s_hat,
        "stderr": est.stderr,
        "warning": est.warning,
    }
    _emit(json.dumps(doc) + "\n", args.out)


def cmd_path(args):
    smp = _load_sample(args.file, args.cap)
    path = rbm_path(smp)
    k = path.k
    cols = {"rbm": ("gamma_rbm", path.gamma)}
    if "hill" in args.estimators:
        cols["hill"] = ("gamma_hill", hill_on_grid(smp, k))
    if "smoohill" in args.estimators:
        cols["smoohill"] = ("gamma_smoohill", smoohill_on_grid(smp, k))
    order = [e for e in ("rbm", "hill", "smoohill") if e in cols]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["k", "s"] + [cols[e][0] for e in order])
    for i, p in enumerate(path.points):
        w.writerow([repr(p.k), p.s] + [repr(float(cols[e][1][i])) for e in order])
    _emit(buf.getvalue(), args.out)


def cmd_bench(args):
    try:
        config = BenchConfig(args.spec, args.n, args.reps, tuple(args.estimators), args.seed,
                             args.cap)
    except UnknownDistribution as exc:
        raise CliError(EXIT_SPEC, str(exc)) from None
    except DomainError as exc:
        raise CliError(EXIT_INPUT, str(exc)) from None
    rows = run_benchmark(config, workers=args.workers)
    text = rows_to_json(rows, config) if args.format == "json" else rows_to_csv(rows)
    _emit(text, args.out)


def cmd_process(args):
    rhos = [r for group in args.rho for r in group]
    if not rhos or any(not r < 0 for r in rhos):
        raise CliError(EXIT_SPEC, "every --rho must be negative")
    if args.paths < 1:
        raise CliError(EXIT_INPUT, "--paths must be at least 1")
    rows = regret_study(rhos, args.paths, args.seed, lam=args.lam)
    _emit(study_csv(rows), args.out)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rbmtail", description="Random Block Maxima tail-index estimation.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("file", help="data file, one decimal number per line")
        p.add_argument("--cap", type=int, nargs="?", const=DEFAULT_CAP, default=None,
                       help=f"keep only the largest M points (default M={DEFAULT_CAP})")
        p.add_argument("--out", help="write to this file instead of stdout")

    p = sub.add_parser("estimate", help="tail-index estimate as JSON")
    add_common(p)
    p.add_argument("--estimator", choices=("rbm", "hill", "smoohill"), default="rbm")
    p.add_argument("--threshold", type=_parse_threshold, default=None,
                   help="auto (default), k:<real> or s:<int>")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("path", help="estimates along the k grid as CSV")
    add_common(p)
    p.add_argument("--estimators", type=_csv_list(("rbm", "hill", "smoohill")),
                   default=["rbm", "hill", "smoohill"])
    p.set_defaults(func=cmd_path)

    p = sub.add_parser("bench", help="Monte Carlo RMSE/bias benchmark")
    p.add_argument("spec", help="distribution, e.g. frechet:2, burr:1:0.5:2, t:6")
    p.add_argument("--n", type=int, required=True, help="sample size before filtering")
    p.add_argument("--reps", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--estimators", type=_csv_list(("rbm", "gh")), default=["rbm", "gh"])
    p.add_argument("--cap", type=int, nargs="?", const=DEFAULT_CAP, default=None)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("process", help="adaptive threshold study on the limit process")
    p.add_argument("--rho", type=_float_list, action="append", required=True,
                   help="second-order parameter(s); repeat or comma-separate")
    p.add_argument("--paths", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--lam", type=float, default=1.0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_process)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except CliError as exc:
        print(f"rbmtail: {exc}", file=sys.stderr)
        return exc.code
    except DomainError as exc:
        print(f"rbmtail: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except FactorizationFailure as exc:
        print(f"rbmtail: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
