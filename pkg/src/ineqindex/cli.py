"""Command-line entry point.

Exit codes: 0 success, 1 domain error (one ``Cause: message`` line on stderr),
2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import distributions as dist
from . import lab
from .decomposition import GroupedSample, decompose_i
from .errors import InequalityError, InvalidSpec
from .indices import index_report
from .ingest import (
    grouped_to_sample,
    read_columns,
    read_grouped_csv,
    read_sample_csv,
    read_values,
    report_to_json,
    write_report,
)


class UsageError(Exception):
    pass


def _column(value: str):
    return int(value) if value.isdigit() else value


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(float(t)) for t in text.split(",") if t.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated sizes, got {text!r}") from None


def _emit(report, out, fmt) -> None:
    if out is None:
        print(json.dumps(report_to_json(report), indent=2))
    else:
        write_report(report, fmt, out)


def _indices_arg(text):
    return None if text is None else [t for t in text.split(",") if t.strip()]


def cmd_compute(args) -> int:
    try:
        sample = read_sample_csv(args.input, _column(args.column))
        report = index_report(sample, _indices_arg(args.indices), signed=args.signed)
    except KeyError as exc:
        raise UsageError(exc.args[0]) from None
    report.metadata.update(source=str(args.input), column=args.column)
    _emit(report, args.out, args.format)
    return 0


def cmd_grouped(args) -> int:
    grouped = read_grouped_csv(args.input)
    sample = grouped_to_sample(grouped, args.top_mean, target_mean=args.target_mean)
    try:
        report = index_report(sample, _indices_arg(args.indices), signed=False)
    except KeyError as exc:
        raise UsageError(exc.args[0]) from None
    report.metadata.update(grouped.metadata, bins=len(grouped.bins))
    _emit(report, args.out, args.format)
    return 0


def cmd_decompose(args) -> int:
    try:
        cols = read_columns(args.input, [_column(args.column), _column(args.group_column)])
    except KeyError as exc:
        raise UsageError(exc.args[0]) from None
    values = read_values(args.input, _column(args.column))
    result = decompose_i(GroupedSample(values, cols[_column(args.group_column)]))
    _emit(result, args.out, "json" if args.out is None else args.format)
    if result.within_share is not None:
        print(f"within_share={result.within_share:.6g} between_share={result.between_share:.6g}")
    else:
        print("total E2 is zero: shares undefined")
    return 0


def _spec_from_args(args) -> dist.DistributionSpec:
    if args.dist:
        return dist.DistributionSpec.parse(args.dist)
    if args.alpha is None:
        raise UsageError("--alpha or --dist is required")
    return dist.pareto(args.alpha)


def cmd_simulate(args) -> int:
    exp = args.experiment
    if exp == "stability":
        cfg = lab.ExperimentConfig(_spec_from_args(args), args.n, args.reps, args.seed, workers=args.workers)
        result = lab.run_stability(cfg)
    elif exp == "convergence":
        spec = _spec_from_args(args)
        if spec.tail_alpha is None or not 0 < spec.tail_alpha < 2:
            raise InvalidSpec("convergence needs a Pareto with 0 < alpha < 2")
        grid = args.grid or (1_000, 10_000, 100_000, 1_000_000)
        cfg = lab.ExperimentConfig(spec, grid[0], args.reps, args.seed, size_grid=grid, workers=args.workers)
        result = lab.run_convergence(cfg)
    elif exp == "bigjump":
        if args.alpha is None:
            raise UsageError("--alpha is required")
        result = lab.run_big_jump(args.alpha, args.n, args.reps, args.seed, workers=args.workers)
    else:
        grid = args.grid or (1_000, 10_000, 100_000)
        result = lab.run_prop1_check(args.reps, args.n, args.seed, grid=grid, workers=args.workers)

    if args.out is not None:
        out = Path(args.out)
        write_report(result, "csv", out)
        write_report(result, "json", out.with_suffix(".json"))
    for key, value in result.derived.items():
        print(f"{key}={value:.6g}")
    for claim in result.claims:
        print(claim.verdict())
    return 0


def cmd_theory(args) -> int:
    params = {}
    for item in args.param or []:
        key, eq, value = item.partition("=")
        if not eq:
            raise UsageError(f"--param expects name=value, got {item!r}")
        params[key] = value
    for name in ("alpha", "xmin", "mean", "shift", "p", "mu", "sigma"):
        value = getattr(args, name)
        if value is not None:
            params[name] = value
    try:
        spec = dist.DistributionSpec(args.family, params)
    except InvalidSpec as exc:
        if args.family.lower() not in dist.FAMILIES:
            raise UsageError(str(exc)) from None
        raise
    payload = {"spec": str(spec), **dist.theoretical_indices(spec).as_dict()}
    print(json.dumps(payload, indent=2))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ineqindex", description="Gini versus variance/second-moment inequality index.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("compute", help="compute indices of one CSV column")
    c.add_argument("--input", required=True, help="CSV file with a header row")
    c.add_argument("--column", required=True, help="column name or 0-based position")
    c.add_argument("--indices", help="comma list, e.g. i,h,g (default: all)")
    c.add_argument("--signed", action="store_true", help="use the mean-absolute-value Gini")
    c.add_argument("--out", help="output path (default: JSON on stdout)")
    c.add_argument("--format", choices=("json", "csv"), default="json")
    c.set_defaults(func=cmd_compute)

    g = sub.add_parser("grouped", help="compute indices of binned lower,upper,count[,mean] data")
    g.add_argument("--input", required=True)
    top = g.add_mutually_exclusive_group()
    top.add_argument("--top-mean", type=float, help="representative value of the open top bin")
    top.add_argument("--target-mean", type=float, help="solve the top value so the overall mean matches")
    g.add_argument("--indices")
    g.add_argument("--out")
    g.add_argument("--format", choices=("json", "csv"), default="json")
    g.set_defaults(func=cmd_grouped)

    d = sub.add_parser("decompose", help="within/between decomposition by a group column")
    d.add_argument("--input", required=True)
    d.add_argument("--column", required=True)
    d.add_argument("--group-column", required=True)
    d.add_argument("--out")
    d.add_argument("--format", choices=("json", "csv"), default="json")
    d.set_defaults(func=cmd_decompose)

    s = sub.add_parser("simulate", help="Monte Carlo experiments")
    s.add_argument("experiment", choices=("stability", "convergence", "bigjump", "prop1"))
    s.add_argument("--alpha", type=float, help="Pareto tail exponent")
    s.add_argument("--dist", help="distribution, e.g. exponential:mean=1 (stability, convergence)")
    s.add_argument("--n", type=int, default=100_000, help="sample size")
    s.add_argument("--reps", type=int, default=100, help="replications")
    s.add_argument("--seed", type=int, required=True, help="master seed")
    s.add_argument("--grid", type=_int_list, help="comma-separated sample sizes")
    s.add_argument("--workers", type=int, default=1, help="worker processes")
    s.add_argument("--out", help="long-format CSV path; the JSON summary goes next to it")
    s.set_defaults(func=cmd_simulate)

    t = sub.add_parser("theory", help="closed-form G and I of a distribution")
    t.add_argument("--family", required=True, help=", ".join(sorted(dist.FAMILIES)))
    for name in ("alpha", "xmin", "mean", "shift", "p", "mu", "sigma"):
        t.add_argument(f"--{name}", type=float)
    t.add_argument("--param", action="append", help="extra name=value parameter")
    t.set_defaults(func=cmd_theory)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.error(str(exc))
    except InequalityError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"FileNotFound: {exc.filename}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"IoError: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
