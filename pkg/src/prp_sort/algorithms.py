"""Instrumented top-k ranking algorithms.

Every oracle question flows through a BatchExecutor, so each run yields a
ranking plus a filled CostLedger. Heapsort and Bubblesort are inherently
sequential (every comparison gates the next one), which is why they accept
only batch size 1 and why asking them to batch is an error rather than a
no-op. Bubblesort is the one algorithm allowed to cache, because its
adjacent sweeps re-ask the same pairs across passes; Quicksort is the one
allowed to batch, through its all-vs-pivot partitions.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from enum import Enum
from random import Random
from typing import Iterable, Sequence

from .errors import InvalidConfig
from .model import CostLedger, DocId, Preference
from .oracles import BatchExecutor, ComparisonRequest, MemoizedOracle, Oracle
from .seeding import stable_seed


class Algorithm(Enum):
    HEAPSORT = "heapsort"
    BUBBLESORT = "bubblesort"
    QUICKSORT = "quicksort"


class PivotStrategy(Enum):
    """Pivot selection rule for Quicksort partitions."""

    FIRST = "first"
    MIDDLE = "middle"
    RANDOM = "random"
    MEDIAN_OF_THREE = "median-of-three"


@dataclass
class AlgoConfig:
    """One algorithm variant: which sorter runs, with what k, batch size,
    cache flag, pivot rule and seed.

    batch_size > 1 is only legal for Quicksort and use_cache only for
    Bubblesort; ``partial`` and ``pivot`` are read by Quicksort alone.
    """

    algorithm: Algorithm
    k: int = 10
    batch_size: int = 1
    use_cache: bool = False
    pivot: PivotStrategy = PivotStrategy.MEDIAN_OF_THREE
    partial: bool = True
    seed: int = 0

    def validate(self) -> None:
        if self.k < 1:
            raise InvalidConfig(f"k must be >= 1, got {self.k}")
        if self.batch_size < 1:
            raise InvalidConfig(f"batch_size must be >= 1, got {self.batch_size}")
        if self.algorithm is not Algorithm.QUICKSORT and self.batch_size != 1:
            raise InvalidConfig(f"{self.algorithm.value} cannot batch; use batch_size=1")
        if self.algorithm is not Algorithm.BUBBLESORT and self.use_cache:
            raise InvalidConfig(f"{self.algorithm.value} cannot cache; use_cache must be false")

    def label(self) -> str:
        if self.algorithm is Algorithm.HEAPSORT:
            return "heapsort"
        if self.algorithm is Algorithm.BUBBLESORT:
            return "bubblesort (cached)" if self.use_cache else "bubblesort (classic)"
        suffix = "" if self.partial else ", full"
        return f"quicksort ({self.pivot.value}, b={self.batch_size}{suffix})"


def _checked_items(items: Iterable[DocId]) -> list[DocId]:
    order = list(items)
    if not order:
        raise InvalidConfig("cannot rank an empty candidate list")
    if any(not doc for doc in order):
        raise InvalidConfig("candidate list contains an empty document id")
    if len(set(order)) != len(order):
        raise InvalidConfig("candidate list contains duplicate document ids")
    return order


def _clamp_k(k: int, n: int) -> int:
    if k < 1:
        raise InvalidConfig(f"k must be >= 1, got {k}")
    if k > n:
        warnings.warn(f"k={k} exceeds the {n} available items; clamping to {n}", stacklevel=3)
        return n
    return k


def _sequential_executor(executor: BatchExecutor | None) -> BatchExecutor:
    if executor is None:
        return BatchExecutor(batch_size=1)
    if executor.batch_size != 1:
        raise InvalidConfig("this algorithm is sequential; executor batch_size must be 1")
    return executor


def _reject_memoized(oracle: Oracle) -> None:
    # Caching is an algorithm-level option (Bubblesort only), not something a
    # caller may smuggle in through a pre-wrapped oracle.
    if isinstance(oracle, MemoizedOracle):
        raise InvalidConfig("pass the base oracle; caching is requested via use_cache")


def heapsort_topk(
    items: Iterable[DocId],
    k: int,
    oracle: Oracle,
    executor: BatchExecutor | None = None,
) -> tuple[list[DocId], CostLedger]:
    """Max-heap build (bottom-up sift-down) plus k extract-max rounds.

    Each sift step asks child-vs-child, then winner-vs-parent. Both are
    singleton groups: every outcome decides the next question, which is what
    rules out batching and caching here. Returns the k extracted ids in
    extraction order (most relevant first).
    """
    executor = _sequential_executor(executor)
    _reject_memoized(oracle)
    heap = _checked_items(items)
    n = len(heap)
    k = _clamp_k(k, n)
    submit = executor.submit_group

    def beats(i: int, j: int) -> bool:
        req = ComparisonRequest(heap[i], heap[j])
        return submit(oracle, (req,))[0] is Preference.FIRST

    def sift_down(i: int, size: int) -> None:
        while True:
            left = 2 * i + 1
            if left >= size:
                return
            right = left + 1
            winner = left if right >= size or beats(left, right) else right
            if not beats(winner, i):
                return
            heap[i], heap[winner] = heap[winner], heap[i]
            i = winner

    for i in range(n // 2 - 1, -1, -1):
        sift_down(i, n)
    ranking = []
    for _ in range(k):
        ranking.append(heap[0])
        last = heap.pop()
        if heap:
            heap[0] = last
            sift_down(0, len(heap))
    return ranking, executor.ledger


def bubblesort_topk(
    items: Iterable[DocId],
    k: int,
    oracle: Oracle,
    use_cache: bool = False,
    executor: BatchExecutor | None = None,
) -> tuple[list[DocId], CostLedger]:
    """Up to k adjacent-sweep passes; pass p bubbles the best remaining item
    into position p, so positions 0..p are final afterwards. Terminates
    early after a swap-free pass.

    Comparisons are singleton groups because a swap changes the next pair,
    so there is nothing independent to batch. With use_cache the oracle is
    wrapped in a run-scoped memo: the pair sequence, outcomes and ranking
    are identical to the classic run, only the hit/call split differs.
    """
    executor = _sequential_executor(executor)
    _reject_memoized(oracle)
    if use_cache:
        oracle = MemoizedOracle(oracle)
    order = _checked_items(items)
    n = len(order)
    k = _clamp_k(k, n)
    submit = executor.submit_group
    for p in range(k):
        swapped = False
        for i in range(n - 1, p, -1):
            req = ComparisonRequest(order[i - 1], order[i])
            if submit(oracle, (req,))[0] is Preference.SECOND:
                order[i - 1], order[i] = order[i], order[i - 1]
                swapped = True
        if not swapped:
            break
    return order[:k], executor.ledger


def select_pivot(
    order: Sequence[DocId],
    lo: int,
    hi: int,
    strategy: PivotStrategy,
    seed: int,
    executor: BatchExecutor,
    oracle: Oracle,
) -> int:
    """Choose the pivot index for the segment [lo, hi].

    Random draws are keyed on (seed, lo, hi) rather than on a shared stream,
    so a pruned partial run picks the same pivot as a full run on every
    segment both visit. Median-of-three submits its three candidate
    comparisons as one independent group (they cost real inferences) and
    returns the element that wins exactly one of its two matches; a cyclic
    outcome falls back to the middle index, and segments shorter than three
    fall back to the first index at zero cost.
    """
    if strategy is PivotStrategy.FIRST:
        return lo
    if strategy is PivotStrategy.MIDDLE:
        return (lo + hi) // 2
    if strategy is PivotStrategy.RANDOM:
        return Random(stable_seed("pivot", seed, lo, hi)).randrange(lo, hi + 1)
    if hi - lo + 1 < 3:
        return lo
    middle = (lo + hi) // 2
    a, b, c = order[lo], order[middle], order[hi]
    prefs = executor.submit_group(
        oracle,
        (ComparisonRequest(a, b), ComparisonRequest(a, c), ComparisonRequest(b, c)),
    )
    wins = {a: 0, b: 0, c: 0}
    wins[a if prefs[0] is Preference.FIRST else b] += 1
    wins[a if prefs[1] is Preference.FIRST else c] += 1
    wins[b if prefs[2] is Preference.FIRST else c] += 1
    median = [doc for doc in (a, b, c) if wins[doc] == 1]
    if len(median) != 1:
        return middle  # intransitive triple: every candidate won once
    if median[0] == a:
        return lo
    if median[0] == b:
        return middle
    return hi


def batch_partition(
    order: list[DocId],
    lo: int,
    hi: int,
    pivot_index: int,
    executor: BatchExecutor,
    oracle: Oracle,
) -> tuple[list[DocId], list[DocId]]:
    """Stable all-vs-pivot partition of the segment [lo, hi].

    Submits (element vs pivot) for every non-pivot element as one
    independent group of exactly hi - lo comparisons, then rebuilds the
    segment as winners + pivot + losers with input order preserved on both
    sides. Returns the (left, right) id lists.
    """
    pivot_doc = order[pivot_index]
    others = [order[i] for i in range(lo, hi + 1) if i != pivot_index]
    prefs = executor.submit_group(
        oracle, [ComparisonRequest(doc, pivot_doc) for doc in others]
    )
    left = [doc for doc, pref in zip(others, prefs) if pref is Preference.FIRST]
    right = [doc for doc, pref in zip(others, prefs) if pref is Preference.SECOND]
    order[lo : hi + 1] = left + [pivot_doc] + right
    return left, right


def quicksort_topk(
    items: Iterable[DocId],
    k: int,
    oracle: Oracle,
    executor: BatchExecutor | None = None,
    pivot: PivotStrategy = PivotStrategy.MEDIAN_OF_THREE,
    partial: bool = True,
    seed: int = 0,
) -> tuple[list[DocId], CostLedger]:
    """Work-list quicksort over index segments with batched partitions.

    Segments are processed in ascending position order off an explicit
    work list (no recursion depth hazard at adversarial pivots). With
    partial=True, a segment is processed only if it intersects positions
    [0, k); everything at or beyond position k is abandoned unsorted.
    Batch size never changes which comparisons are asked or their outcomes,
    only how misses are chunked into calls, so the ranking is invariant
    across batch sizes.
    """
    if executor is None:
        executor = BatchExecutor(batch_size=1)
    _reject_memoized(oracle)
    order = _checked_items(items)
    n = len(order)
    k = _clamp_k(k, n)
    segments = [(0, n - 1)]
    while segments:
        lo, hi = segments.pop()
        if lo >= hi:
            continue
        if partial and lo >= k:
            continue
        pivot_index = select_pivot(order, lo, hi, pivot, seed, executor, oracle)
        left, _ = batch_partition(order, lo, hi, pivot_index, executor, oracle)
        mid = lo + len(left)
        segments.append((mid + 1, hi))
        segments.append((lo, mid - 1))
    return order[:k], executor.ledger


def run_algorithm(
    items: Iterable[DocId], config: AlgoConfig, oracle: Oracle
) -> tuple[list[DocId], CostLedger]:
    """Run one configured algorithm with a fresh executor."""
    config.validate()
    if config.algorithm is Algorithm.HEAPSORT:
        return heapsort_topk(items, config.k, oracle)
    if config.algorithm is Algorithm.BUBBLESORT:
        return bubblesort_topk(items, config.k, oracle, use_cache=config.use_cache)
    return quicksort_topk(
        items,
        config.k,
        oracle,
        BatchExecutor(config.batch_size),
        pivot=config.pivot,
        partial=config.partial,
        seed=config.seed,
    )
