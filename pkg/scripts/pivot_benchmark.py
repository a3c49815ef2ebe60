#!/usr/bin/env python3
"""Per-method benchmark table: NDCG@k, comparisons and inference calls for
every pivot strategy at two batch sizes, next to heapsort and bubblesort.

With the deterministic score oracle every method ranks perfectly (NDCG 1.0);
pass --noise to see quality and cost move under an unreliable comparator.
"""

import argparse
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "src"))

from prp_sort import (  # noqa: E402
    AlgoConfig,
    Algorithm,
    ExperimentConfig,
    OracleSpec,
    PivotStrategy,
    SyntheticSpec,
    run_experiment,
)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--queries", type=int, default=200)
    parser.add_argument("--n", type=int, default=100)
    parser.add_argument("--k", type=int, default=10)
    parser.add_argument("--seed", type=int, default=1729)
    parser.add_argument("--noise", type=float, default=0.0, help="comparator flip probability")
    parser.add_argument("--batch-sizes", type=int, nargs="*", default=[2, 128])
    args = parser.parse_args()

    algorithms = [AlgoConfig(Algorithm.HEAPSORT, k=args.k)]
    for pivot in PivotStrategy:
        for batch_size in args.batch_sizes:
            algorithms.append(
                AlgoConfig(Algorithm.QUICKSORT, k=args.k, batch_size=batch_size, pivot=pivot)
            )
    algorithms.append(AlgoConfig(Algorithm.BUBBLESORT, k=args.k))
    algorithms.append(AlgoConfig(Algorithm.BUBBLESORT, k=args.k, use_cache=True))

    oracle = (
        OracleSpec(kind="score")
        if args.noise == 0.0
        else OracleSpec(kind="noisy", flip_probability=args.noise, seed=args.seed)
    )
    config = ExperimentConfig(
        dataset=SyntheticSpec(num_queries=args.queries, n=args.n),
        algorithms=algorithms,
        oracle=oracle,
        k=args.k,
        master_seed=args.seed,
    )
    report = run_experiment(config)
    print(
        f"{args.queries} queries, n={args.n}, k={args.k}, "
        f"noise={args.noise}, seed={args.seed}"
    )
    print(f"{'method':42s} {'NDCG@' + str(args.k):>8s} {'#comp':>10s} {'#inf':>10s}")
    for agg in report.aggregates:
        print(
            f"{agg.algorithm:42s} {agg.mean_ndcg:8.3f} "
            f"{agg.mean_comparisons:10.1f} {agg.mean_inference_calls:10.1f}"
        )
    return 0


if __name__ == "__main__":
    sys.exit(main())
