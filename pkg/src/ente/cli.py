"""Command-line surface.

Exit codes: 0 success, 1 usage error, 2 data/analysis error. Windows and
delays are given in samples. --threads tunes performance only and never
changes results.
"""

import argparse
import sys

import numpy as np

from . import bench as bench_mod
from . import io_formats
from .data import AnalysisConfig, EmbeddingSpec
from .embedding import optimize_embedding
from .engine import set_workers
from .exceptions import EnteError
from .inference import analyze_pair
from .simulators import (ARParams, LorenzParams, simulate_ar_pair,
                         simulate_lorenz_pair, table1_params)


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _parse_window(text: str):
    try:
        lo, hi = (int(p) for p in text.split(":"))
    except ValueError:
        raise _UsageError(f"--window expects T-:T+, got {text!r}")
    if lo > hi:
        raise _UsageError(f"--window requires t- <= t+, got {text!r}")
    return lo, hi


def _parse_u(text: str):
    parts = text.split(":")
    try:
        if len(parts) == 1:
            return (int(parts[0]),)
        if len(parts) == 2:
            lo, hi = int(parts[0]), int(parts[1])
            return tuple(range(lo, hi + 1))
        if len(parts) == 3:
            lo, hi, step = (int(p) for p in parts)
            return tuple(range(lo, hi + 1, step))
    except ValueError:
        pass
    raise _UsageError(f"--u expects U or U1:U2 or U1:U2:STEP, got {text!r}")


def _parse_range(text: str, flag: str):
    try:
        lo, hi = (int(p) for p in text.split(":"))
        return list(range(lo, hi + 1))
    except ValueError:
        raise _UsageError(f"{flag} expects LO:HI, got {text!r}")


def build_parser() -> _Parser:
    parser = _Parser(prog="ente",
                     description="Ensemble transfer entropy estimation")
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="generate evaluation data")
    sim_sub = sim.add_subparsers(dest="system", required=True)

    lor = sim_sub.add_parser("lorenz")
    lor.add_argument("--reps", type=int, required=True)
    lor.add_argument("--samples", type=int, required=True)
    lor.add_argument("--delta", type=int, default=45)
    lor.add_argument("--gamma", type=float, default=0.3)
    lor.add_argument("--coupling-window", default=None,
                     help="T1:T2 samples with nonzero coupling (default: always on)")
    lor.add_argument("--seed", type=int, default=0)
    lor.add_argument("--out", required=True, help="output prefix")
    lor.add_argument("--format", choices=["csv", "bin"], default="bin")

    ar = sim_sub.add_parser("ar")
    ar.add_argument("--scenario", choices=["unidirectional", "two_step", "bidirectional"],
                    required=True)
    ar.add_argument("--reps", type=int, required=True)
    ar.add_argument("--samples", type=int, required=True)
    ar.add_argument("--seed", type=int, default=0)
    ar.add_argument("--out", required=True, help="output prefix")
    ar.add_argument("--format", choices=["csv", "bin"], default="bin")

    for name in ("analyze", "scan-delay"):
        an = sub.add_parser(name)
        an.add_argument("--source", required=True)
        an.add_argument("--target", required=True)
        an.add_argument("--format", choices=["csv", "bin"], default="bin")
        an.add_argument("--k", type=int, default=4)
        an.add_argument("--surrogates", type=int, default=500)
        an.add_argument("--alpha", type=float, default=0.05)
        an.add_argument("--window", required=True)
        an.add_argument("--u", required=True)
        an.add_argument("--dim", type=int, default=1)
        an.add_argument("--tau", type=int, default=1)
        an.add_argument("--dim-source", type=int, default=None)
        an.add_argument("--tau-source", type=int, default=None)
        an.add_argument("--ragwitz", action="store_true",
                        help="optimize embedding instead of fixed --dim/--tau")
        an.add_argument("--ragwitz-dims", default="1:5")
        an.add_argument("--ragwitz-taus", default="1:3")
        an.add_argument("--seed", type=int, default=0)
        an.add_argument("--threads", type=int, default=None)
        an.add_argument("--correction", choices=["none", "bonferroni", "fdr"],
                        default="none")
        an.add_argument("--jitter", type=float, default=1e-8)
        an.add_argument("--statistic", choices=["max", "selected"], default="max")
        an.add_argument("--test-u", default=None,
                        help="delay grid for the max statistic (U or U1:U2[:STEP]); "
                             "default: all scanned delays")
        an.add_argument("--out", required=True)
        if name == "scan-delay":
            an.add_argument("--curve-out", default=None,
                            help="CSV path for the (u, te) curve")

    be = sub.add_parser("bench")
    be.add_argument("--points", type=int, default=30094)
    be.add_argument("--joint-dim", type=int, default=17)
    be.add_argument("--marginal-dim", type=int, default=8)
    be.add_argument("--k", type=int, default=4)
    be.add_argument("--chunks", default="1,2,4",
                    help="comma-separated ascending chunk counts")
    be.add_argument("--repeats", type=int, default=3)
    be.add_argument("--seed", type=int, default=0)
    be.add_argument("--threads", type=int, default=None)
    be.add_argument("--out", required=True)

    va = sub.add_parser("validate")
    va.add_argument("path")
    va.add_argument("--format", choices=["csv", "bin"], default="bin")
    return parser


def _cmd_simulate(args) -> int:
    if args.system == "lorenz":
        if args.coupling_window is not None:
            lo, hi = _parse_window(args.coupling_window)
            schedule = lambda t: args.gamma if lo <= t <= hi else 0.0
        else:
            schedule = lambda t: args.gamma
        x, y = simulate_lorenz_pair(LorenzParams(
            delta_xy=args.delta, n_repetitions=args.reps, n_samples=args.samples,
            gamma_schedule=schedule, seed=args.seed))
    else:
        x, y = simulate_ar_pair(table1_params(args.scenario, args.reps,
                                              args.samples, seed=args.seed))
    ext = args.format
    io_formats.save_ensemble(x, f"{args.out}_X.{ext}", ext)
    io_formats.save_ensemble(y, f"{args.out}_Y.{ext}", ext)
    print(f"wrote {args.out}_X.{ext} and {args.out}_Y.{ext}")
    return 0


def _cmd_analyze(args, emit_curve: bool) -> int:
    window = _parse_window(args.window)
    u_candidates = _parse_u(args.u)
    test_grid = None if args.test_u is None else _parse_u(args.test_u)
    if args.threads is not None:
        set_workers(args.threads)
    source = io_formats.load_ensemble(args.source, args.format)
    target = io_formats.load_ensemble(args.target, args.format)
    config = AnalysisConfig(
        u_candidates=u_candidates, window=window,
        k=args.k, n_surrogates=args.surrogates, alpha=args.alpha,
        correction=args.correction, seed=args.seed, jitter_amplitude=args.jitter,
        scan_statistic=args.statistic, test_grid=test_grid)
    if args.ragwitz:
        dims = _parse_range(args.ragwitz_dims, "--ragwitz-dims")
        taus = _parse_range(args.ragwitz_taus, "--ragwitz-taus")
        spec_x, _ = optimize_embedding(source, dims, taus, seed=args.seed)
        spec_y, _ = optimize_embedding(target, dims, taus, seed=args.seed)
    else:
        spec_y = EmbeddingSpec(args.dim, args.tau)
        spec_x = EmbeddingSpec(args.dim_source or args.dim,
                               args.tau_source or args.tau)
    result = analyze_pair(source, target, spec_x, spec_y, config)
    io_formats.write_results([result], args.out, config)
    if emit_curve and getattr(args, "curve_out", None):
        io_formats.write_te_curve_csv(result, args.curve_out)
    verdict = "significant" if result.significant else "not significant"
    print(f"{result.source}->{result.target} window {result.window}: "
          f"TE={result.te_value:.6f} nats at u={result.u_selected}, "
          f"p={result.p_value:.4f} ({verdict})")
    return 0


def _cmd_bench(args) -> int:
    try:
        chunks = [int(c) for c in args.chunks.split(",")]
    except ValueError:
        raise _UsageError(f"--chunks expects comma-separated integers, got {args.chunks!r}")
    report = bench_mod.run_bench(args.points, args.joint_dim, args.marginal_dim,
                                 args.k, chunks, repeats=args.repeats,
                                 seed=args.seed, workers=args.threads)
    with open(args.out, "w") as fh:
        fh.write(report.to_csv())
    print(f"hardware: {report.hardware}")
    print(report.to_csv(), end="")
    return 0


def _cmd_validate(args) -> int:
    series = io_formats.load_ensemble(args.path, args.format)
    print(f"{args.path}: channel {series.channel_name!r}, "
          f"R={series.n_repetitions}, N={series.n_samples}: ok")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "simulate":
            return _cmd_simulate(args)
        if args.command == "analyze":
            return _cmd_analyze(args, emit_curve=False)
        if args.command == "scan-delay":
            return _cmd_analyze(args, emit_curve=True)
        if args.command == "bench":
            return _cmd_bench(args)
        if args.command == "validate":
            return _cmd_validate(args)
        raise _UsageError(f"unknown command {args.command!r}")
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except EnteError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
