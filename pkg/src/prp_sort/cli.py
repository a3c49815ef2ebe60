"""Command line interface: prp-sort run | synth | version."""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .algorithms import Algorithm, AlgoConfig, PivotStrategy
from .datasets import generate_synthetic, write_dataset_json
from .errors import RankingError
from .experiment import ExperimentReport, config_from_dict, emit_report, run_experiment


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="prp-sort",
        description="Top-k pairwise ranking under an inference-call cost model.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run an experiment sweep from a JSON config")
    run.add_argument("--config", required=True, help="path to the experiment config (JSON)")
    run.add_argument(
        "--algo",
        choices=[a.value for a in Algorithm],
        help="replace the config's algorithm matrix with this single algorithm",
    )
    run.add_argument("--batch-size", type=int, help="batch size for --algo quicksort")
    run.add_argument(
        "--pivot",
        choices=[p.value for p in PivotStrategy],
        help="pivot strategy for --algo quicksort",
    )
    run.add_argument(
        "--cache",
        action=argparse.BooleanOptionalAction,
        default=None,
        help="enable the memo cache for --algo bubblesort",
    )
    run.add_argument(
        "--partial",
        action=argparse.BooleanOptionalAction,
        default=None,
        help="prune quicksort segments outside the top-k range (default on)",
    )
    run.add_argument("--k", type=int, help="top-k cutoff and NDCG cutoff override")
    run.add_argument("--seed", type=int, help="master seed override")
    run.add_argument("--format", choices=["csv", "jsonl"], help="output format override")
    run.add_argument("--out", help="output path override ('-' for stdout)")
    run.set_defaults(func=_cmd_run)

    synth = sub.add_parser("synth", help="generate a synthetic dataset as JSON")
    synth.add_argument("--queries", type=int, required=True, help="number of queries")
    synth.add_argument("--n", type=int, required=True, help="candidates per query")
    synth.add_argument("--seed", type=int, default=0, help="master seed")
    synth.add_argument("--out", required=True, help="output JSON path")
    synth.set_defaults(func=_cmd_synth)

    version = sub.add_parser("version", help="print the package version")
    version.set_defaults(func=_cmd_version)
    return parser


def _cmd_run(args: argparse.Namespace) -> int:
    with open(args.config, encoding="utf-8") as handle:
        raw = json.load(handle)
    if args.k is not None:
        raw["k"] = args.k
        for entry in raw.get("algorithms", []):
            entry["k"] = args.k
    if args.seed is not None:
        raw["seed"] = args.seed
    config = config_from_dict(raw)
    if args.algo is not None:
        override = AlgoConfig(
            algorithm=Algorithm(args.algo),
            k=config.k,
            batch_size=args.batch_size if args.batch_size is not None else 1,
            use_cache=bool(args.cache),
            pivot=PivotStrategy(args.pivot) if args.pivot else PivotStrategy.MEDIAN_OF_THREE,
            partial=args.partial if args.partial is not None else True,
        )
        override.validate()
        config.algorithms = [override]
    if args.format is not None:
        config.out_format = args.format
    if args.out is not None:
        config.out_path = args.out
    report = run_experiment(config)
    emit_report(report, config.out_format, config.out_path)
    if config.out_path not in (None, "-"):
        print(f"wrote {config.out_format} report to {config.out_path}")
        _print_summary(report)
    return 0


def _print_summary(report: ExperimentReport) -> None:
    header = f"{'algorithm':38s} {'n':>4s} {'comparisons':>16s} {'inferences':>16s} {'ndcg':>7s} {'gain%':>7s}"
    print(header)
    print("-" * len(header))
    for agg in report.aggregates:
        if agg.n_queries == 0:
            print(f"{agg.algorithm:38s} {0:4d}  (all {agg.failures} queries failed)")
            continue
        comp = f"{agg.mean_comparisons:8.1f}±{agg.sd_comparisons:6.1f}"
        inf = f"{agg.mean_inference_calls:8.1f}±{agg.sd_inference_calls:6.1f}"
        ndcg = f"{agg.mean_ndcg:.4f}" if agg.mean_ndcg is not None else "   -"
        gain = f"{agg.gain_pct:6.1f}" if agg.gain_pct is not None else "     -"
        print(f"{agg.algorithm:38s} {agg.n_queries:4d} {comp:>16s} {inf:>16s} {ndcg:>7s} {gain:>7s}")


def _cmd_synth(args: argparse.Namespace) -> int:
    dataset = generate_synthetic(args.queries, args.n, args.seed)
    write_dataset_json(dataset, args.out)
    print(f"wrote {args.queries} queries x {args.n} candidates to {args.out}")
    return 0


def _cmd_version(_args: argparse.Namespace) -> int:
    print(__version__)
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except RankingError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
