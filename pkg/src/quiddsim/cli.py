"""bench: command-line driver for the experiment battery.

Usage::

    bench <experiment> [--k-min N] [--k-max N] [--m N]
                       [--marked FILE | --cnf FILE]
                       [--reps N] [--seed N] [--out PATH]

Experiments: scaling, oracle_stats, crossover, trace,
repeat_until_all_found.
CSV goes to --out (or stays in memory); summaries go to stderr.  Exit
status is 0 on success and 1 with a diagnostic line on any error.
"""

from __future__ import annotations

import argparse
import sys

from . import bench


def _add_common(p: argparse.ArgumentParser, k_min: int, k_max: int,
                reps: int, m_default: int | None) -> None:
    p.add_argument("--k-min", type=int, default=k_min,
                   help=f"smallest register size in qubits (default {k_min})")
    p.add_argument("--k-max", type=int, default=k_max,
                   help=f"largest register size in qubits (default {k_max})")
    p.add_argument("--m", type=int, default=m_default,
                   help="marked-set size; indices are drawn from the seed "
                        f"(default {m_default})")
    p.add_argument("--marked", metavar="FILE", default=None,
                   help="marked-set file: one decimal index per line, "
                        "'#' starts a comment; uses --k-min as k")
    p.add_argument("--cnf", metavar="FILE", default=None,
                   help="DIMACS CNF file; the register size comes from its header")
    p.add_argument("--reps", type=int, default=reps,
                   help=f"repetitions (default {reps})")
    p.add_argument("--seed", type=int, default=0,
                   help="base seed; derived streams make output reproducible "
                        "(default 0)")
    p.add_argument("--out", metavar="PATH", default=None,
                   help="write the CSV table here (default: no file)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bench",
        description="Benchmark experiments for the compressed Grover simulator.")
    sub = parser.add_subparsers(dest="experiment", required=True)

    p = sub.add_parser("scaling",
                       help="time the Grover loop per k and fit c*k*b^k")
    _add_common(p, 10, 20, 3, 1)

    p = sub.add_parser("oracle_stats",
                       help="compile oracles and report diagram sizes")
    _add_common(p, 4, 24, 1, 1)

    p = sub.add_parser("crossover",
                       help="analytic query counts of every strategy per k")
    _add_common(p, 10, 20, 1, 1)

    p = sub.add_parser("trace",
                       help="per-iteration profile of one run at k = --k-min")
    _add_common(p, 6, 6, 1, 1)
    p.add_argument("--iterations", type=int, default=None,
                   help="explicit iteration count (default: ideal)")
    p.add_argument("--iter-mult", type=float, default=None,
                   help="run this multiple of the ideal iteration count")

    p = sub.add_parser("repeat_until_all_found",
                       help="repeat runs until every marked item was observed")
    _add_common(p, 6, 6, 1000, 4)
    return parser


def _config_from(args: argparse.Namespace) -> bench.ExperimentConfig:
    return bench.ExperimentConfig(
        kind=args.experiment,
        k_min=args.k_min,
        k_max=args.k_max,
        marked_count=args.m,
        marked_path=args.marked,
        cnf_path=args.cnf,
        repetitions=args.reps,
        seed=args.seed,
        out=args.out,
        iterations=getattr(args, "iterations", None),
        iteration_multiplier=getattr(args, "iter_mult", None),
    )


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        # argparse has already written help or a diagnostic; fold its
        # exit status into the documented 0-or-1 contract.
        return 0 if not exc.code else 1
    try:
        cfg = _config_from(args)
        if cfg.kind == "scaling":
            fit = bench.run_scaling(cfg)
            print(f"scaling fit: time ~ {fit.constant_ns:.4g} ns * k * "
                  f"{fit.growth_base:.4f}^k over {len(fit.samples)} sizes; "
                  f"peak-node/k correlation {fit.peak_node_correlation:.4f}",
                  file=sys.stderr)
        elif cfg.kind == "oracle_stats":
            rows = bench.run_oracle_stats(cfg)
            print(f"oracle_stats: {len(rows)} oracles compiled", file=sys.stderr)
        elif cfg.kind == "crossover":
            rows = bench.run_crossover(cfg)
            print(f"crossover: {len(rows)} rows", file=sys.stderr)
        elif cfg.kind == "trace":
            record = bench.run_trace(cfg)
            print(f"trace: k={record.k} M={record.marked_count} "
                  f"iterations={record.iterations} "
                  f"final success {record.trace[-1].success_prob:.6f}",
                  file=sys.stderr)
        else:
            result = bench.run_repeat_all(cfg)
            print(f"repeat_until_all_found: mean repetitions {result.mean_repetitions:.4f} "
                  f"(coupon-collector expectation "
                  f"{result.coupon_collector_expectation:.4f})",
                  file=sys.stderr)
    except Exception as exc:      # surface everything as a diagnostic line
        print(f"bench: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
