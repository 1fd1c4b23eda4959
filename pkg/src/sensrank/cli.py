"""Command-line front end.

Four subcommands: ``test`` (one uniform or fixed decision), ``gamma``
(threshold search), ``design`` (pi(x)/gamma(x) curve plus the uniform
sup), and ``power`` (Monte Carlo sweep).  Reports are JSON for decisions
and thresholds, CSV for curves and sweeps; every output embeds the full
effective configuration after defaults, so a report is replayable from
its own header.  Outputs for a fixed seed are byte-identical across
runs (the power JSON summary also carries wall-clock metadata and is
exempt).

Exit codes: 0 success, 2 input error (unreadable or malformed data),
3 configuration error (invalid parameter combinations), 4 numeric
failure.  Errors print a single line ``sensrank: <kind>: <message>`` on
stderr.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from . import __version__
from .alternatives import parse_dist
from .boundary import DEFAULT_X0
from .data import digest, load_csv, rank_by_abs
from .design import default_x_grid, gamma_tilde_uniform
from .errors import ConfigError, InputError, NumericError, SensrankError
from .power import PowerSpec, power_sweep
from .scores import parse_score
from .tester import (DEFAULT_BISECT_TOL, DEFAULT_GAMMA_MAX,
                     DEFAULT_GRID_POINTS, default_gamma_grid, fixed_test,
                     gamma_threshold, uniform_test)

SCHEMA_VERSION = 1

_EXIT_OK = 0
_EXIT_INPUT = 2
_EXIT_CONFIG = 3
_EXIT_NUMERIC = 4

# desk-scale default; the power module itself defaults to 10,000
CLI_POWER_REPS = 1000


def _json_safe(obj):
    """Recursively make obj serializable with strict (RFC-compliant)
    JSON: numpy scalars unwrapped, non-finite floats as strings."""
    if isinstance(obj, dict):
        return {k: _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_safe(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_json_safe(v) for v in obj.tolist()]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        if math.isfinite(v):
            return v
        return repr(v)      # 'inf', '-inf', 'nan'
    return obj


def _emit_json(report: dict, path: str | None) -> None:
    text = json.dumps(_json_safe(report), indent=2, sort_keys=True) + "\n"
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _emit_text(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _fmt_cell(v) -> str:
    """Round-trippable CSV cell."""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _csv_text(comment: str, header: tuple, rows: list) -> str:
    """One `# config:` comment line, then properly quoted CSV."""
    buf = io.StringIO()
    buf.write(comment + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt_cell(v) for v in row])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# subcommands


def _cmd_test(args) -> int:
    score = parse_score(args.score)
    data = load_csv(args.input)
    if args.kind == "uniform":
        result = uniform_test(data, score, args.gamma, args.alpha, args.x0)
    else:
        result = fixed_test(data, score, args.gamma, args.alpha, args.method,
                            reps=args.reps, seed=args.seed)
    config = {
        "input": args.input,
        "score": args.score,
        "gamma": args.gamma,
        "alpha": args.alpha,
        "x0": args.x0 if args.kind == "uniform" else None,
        "kind": args.kind,
        "method": None if args.kind == "uniform" else
        (args.method or ("exact_sign" if score.kind == "sign"
                         else "normal_approx")),
        "seed": args.seed,
    }
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": "test",
        "config": config,
        "data": digest(rank_by_abs(data)),
        "result": {
            "reject": result.reject,
            "crossing_ranks": list(result.crossing_ranks),
            "max_margin": result.max_margin,
            "statistic": result.statistic,
            "critical_value": result.critical_value,
            "gamma": result.gamma,
            "alpha": result.alpha,
            "x0": result.x0,
            "score": result.score_spec,
            "kind": result.kind,
            "starred": result.starred,
            "n": result.n,
            "degenerate": result.degenerate,
        },
    }
    _emit_json(report, args.output)
    return _EXIT_OK


def _cmd_gamma(args) -> int:
    score = parse_score(args.score)
    data = load_csv(args.input)
    grid = default_gamma_grid(args.gamma_max, args.grid_points)
    found = gamma_threshold(data, score, args.alpha, args.x0, args.kind,
                            grid, bisect_tol=args.bisect_tol,
                            method=args.method, reps=args.reps,
                            seed=args.seed)
    config = {
        "input": args.input,
        "score": args.score,
        "alpha": args.alpha,
        "x0": args.x0 if args.kind == "uniform" else None,
        "kind": args.kind,
        "method": None if args.kind == "uniform" else
        (args.method or ("exact_sign" if score.kind == "sign"
                         else "normal_approx")),
        "gamma_max": args.gamma_max,
        "grid_points": args.grid_points,
        "bisect_tol": args.bisect_tol,
        "seed": args.seed,
    }
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": "gamma",
        "config": config,
        "data": digest(rank_by_abs(data)),
        "result": {
            "gamma_hat": found.gamma_hat,
            "rejects_at_one": found.rejects_at_one,
            "at_cap": found.at_cap,
            "monotone_ok": found.monotone_ok,
            "bracket": list(found.bracket) if found.bracket else None,
            "grid_size": int(found.grid.size),
            "rejected_grid_points": int(found.decisions.sum()),
        },
    }
    _emit_json(report, args.output)
    return _EXIT_OK


def _cmd_design(args) -> int:
    score = parse_score(args.score)
    dist = parse_dist(args.dist)
    grid = default_x_grid(args.points, args.x_min)
    summary = gamma_tilde_uniform(score, dist, grid,
                                  probe_tail=not args.no_probe)
    config = {
        "score": args.score,
        "dist": args.dist,
        "points": args.points,
        "x_min": args.x_min,
        "probe_tail": not args.no_probe,
        "schema_version": SCHEMA_VERSION,
        "gamma_tilde": summary.gamma_tilde,
        "infinite": summary.infinite,
        "pi_max": summary.pi_max,
        "x_at": summary.x_at,
    }
    curve = summary.curve
    rows = [(float(x), float(pi), float(gamma))
            for x, pi, gamma in zip(curve.x, curve.pi, curve.gamma)]
    comment = "# config: " + json.dumps(_json_safe(config), sort_keys=True)
    _emit_text(_csv_text(comment, ("x", "pi", "gamma"), rows), args.output)
    return _EXIT_OK


def _parse_list(text: str, kind, what: str):
    try:
        return [kind(part) for part in text.split(",") if part != ""]
    except ValueError as exc:
        raise ConfigError(f"bad {what} list {text!r}") from exc


def _cmd_power(args) -> int:
    ns = _parse_list(args.n, int, "n")
    gammas = _parse_list(args.gamma, float, "gamma")
    tests = _parse_list(args.test, str, "test")
    scores = _parse_list(args.score, str, "score")
    if not (ns and gammas and tests and scores):
        raise ConfigError("power grids must be nonempty")
    base = PowerSpec(score=scores[0], dist=args.dist, n=ns[0],
                     gamma=gammas[0], alpha=args.alpha, x0=args.x0,
                     test=tests[0], reps=args.reps, seed=args.seed)
    table = power_sweep(base, n_values=ns, gamma_values=gammas,
                        test_kinds=tests, score_kinds=scores)
    config = {
        "dist": args.dist,
        "score": args.score,
        "test": args.test,
        "n": args.n,
        "gamma": args.gamma,
        "alpha": args.alpha,
        "x0": args.x0,
        "reps": args.reps,
        "seed": args.seed,
        "schema_version": SCHEMA_VERSION,
    }
    rows = [tuple(rec[col] for col in table.CSV_COLUMNS)
            for rec in table.csv_records()]
    comment = "# config: " + json.dumps(_json_safe(config), sort_keys=True)
    _emit_text(_csv_text(comment, table.CSV_COLUMNS, rows), args.output)
    if args.summary is not None:
        report = {
            "schema_version": SCHEMA_VERSION,
            "command": "power",
            "config": config,
            "summary": table.summary(),
        }
        _emit_json(report, args.summary)
    return _EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing


class _Parser(argparse.ArgumentParser):
    """argparse that raises instead of exiting, so main() owns exit codes."""

    def error(self, message):
        raise InputError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sensrank",
                     description="Sensitivity analysis for paired studies "
                                 "with uniform signed rank tests.")
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common_test_args(p, with_x0=True):
        p.add_argument("--score", default="sign",
                       help="sign | wilcoxon | normal | "
                            "redescending[:m,mlo,mhi] (default sign)")
        p.add_argument("--alpha", type=float, default=0.05,
                       help="test level (default 0.05)")
        if with_x0:
            p.add_argument("--x0", type=float, default=DEFAULT_X0,
                           help="boundary tuning level in (0,1] "
                                "(default 1/3)")
        p.add_argument("--kind", choices=("uniform", "fixed"),
                       default="uniform",
                       help="test variant (default uniform)")
        p.add_argument("--method", default=None,
                       choices=("exact_sign", "normal_approx", "monte_carlo"),
                       help="fixed-test critical value method (default "
                            "exact_sign for the sign score, normal_approx "
                            "otherwise)")
        p.add_argument("--seed", type=int, default=0,
                       help="seed for monte_carlo critical values "
                            "(default 0)")
        p.add_argument("--output", default=None,
                       help="write report here instead of stdout")

    p_test = sub.add_parser("test", help="one reject/fail decision at "
                                         "a given gamma")
    p_test.add_argument("--input", required=True,
                        help="CSV with column y, or treated and control")
    p_test.add_argument("--gamma", type=float, default=1.0,
                        help="sensitivity parameter >= 1 (default 1)")
    common_test_args(p_test)
    p_test.add_argument("--reps", type=int, default=100_000,
                        help="replicates for monte_carlo critical values")
    p_test.set_defaults(func=_cmd_test)

    p_gamma = sub.add_parser("gamma", help="largest gamma still rejected")
    p_gamma.add_argument("--input", required=True,
                         help="CSV with column y, or treated and control")
    common_test_args(p_gamma)
    p_gamma.add_argument("--gamma-max", type=float,
                         default=DEFAULT_GAMMA_MAX,
                         help="grid upper end (default 100)")
    p_gamma.add_argument("--grid-points", type=int,
                         default=DEFAULT_GRID_POINTS,
                         help="geometric grid size (default 400)")
    p_gamma.add_argument("--bisect-tol", type=float,
                         default=DEFAULT_BISECT_TOL,
                         help="bracket refinement tolerance (default 0.01)")
    p_gamma.add_argument("--reps", type=int, default=100_000,
                         help="replicates for monte_carlo critical values")
    p_gamma.set_defaults(func=_cmd_gamma)

    p_design = sub.add_parser("design",
                              help="pi(x) and gamma(x) curve with the "
                                   "uniform design sensitivity")
    p_design.add_argument("--score", default="sign",
                          help="score function spec (default sign)")
    p_design.add_argument("--dist", required=True,
                          help="normal:tau,sigma | laplace:tau,b | "
                               "cauchy:tau,s | rare:base,scale,eps,taubig")
    p_design.add_argument("--points", type=int, default=200,
                          help="x grid size (default 200)")
    p_design.add_argument("--x-min", type=float, default=1e-4,
                          help="smallest grid x (default 1e-4)")
    p_design.add_argument("--no-probe", action="store_true",
                          help="skip the deep-tail probe ladder")
    p_design.add_argument("--output", default=None,
                          help="write CSV here instead of stdout")
    p_design.set_defaults(func=_cmd_design)

    p_power = sub.add_parser("power", help="Monte Carlo power sweep")
    p_power.add_argument("--score", default="sign",
                         help="comma list of score specs (default sign)")
    p_power.add_argument("--dist", required=True,
                         help="alternative distribution spec")
    p_power.add_argument("--n", default="100",
                         help="comma list of sample sizes (default 100)")
    p_power.add_argument("--gamma", default="1",
                         help="comma list of gammas (default 1)")
    p_power.add_argument("--test", default="uniform",
                         help="comma list from {uniform,fixed} "
                              "(default uniform)")
    p_power.add_argument("--alpha", type=float, default=0.05,
                         help="test level (default 0.05)")
    p_power.add_argument("--x0", type=float, default=DEFAULT_X0,
                         help="boundary tuning level (default 1/3)")
    p_power.add_argument("--reps", type=int, default=CLI_POWER_REPS,
                         help="replications per cell (default 1000)")
    p_power.add_argument("--seed", type=int, default=0,
                         help="base seed (default 0)")
    p_power.add_argument("--output", default=None,
                         help="write CSV here instead of stdout")
    p_power.add_argument("--summary", default=None,
                         help="also write a JSON summary here")
    p_power.set_defaults(func=_cmd_power)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except InputError as exc:
        print(f"sensrank: input error: {exc}", file=sys.stderr)
        return _EXIT_INPUT
    except ConfigError as exc:
        print(f"sensrank: config error: {exc}", file=sys.stderr)
        return _EXIT_CONFIG
    except NumericError as exc:
        print(f"sensrank: numeric error: {exc}", file=sys.stderr)
        return _EXIT_NUMERIC
    except SensrankError as exc:     # base class catch-all, same as config
        print(f"sensrank: error: {exc}", file=sys.stderr)
        return _EXIT_CONFIG
    except ValueError as exc:
        print(f"sensrank: config error: {exc}", file=sys.stderr)
        return _EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
