"""Ranking quality (NDCG@k) and cost aggregation."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from statistics import fmean, pstdev
from typing import Iterable, Sequence

from .errors import EmptySample, InvalidConfig, ZeroBaseline
from .model import DocId


@dataclass
class RelevanceMap:
    """Graded judgments keyed by query id then document id.

    Pairs that were never judged default to grade 0.
    """

    by_query: dict[str, dict[str, int]] = field(default_factory=dict)

    def grade(self, qid: str, doc: DocId) -> int:
        return self.by_query.get(qid, {}).get(doc, 0)

    def grades_for(self, qid: str) -> list[int]:
        """All judged grades for a query (the ideal-DCG pool)."""
        return list(self.by_query.get(qid, {}).values())


@dataclass(frozen=True)
class CostStats:
    """Mean and population standard deviation of a sample."""

    mean: float
    sd: float
    n: int


def ndcg_at_k(ranking: Sequence[DocId], grades: RelevanceMap, qid: str, k: int) -> float:
    """Exponential-gain NDCG at cutoff k.

    DCG sums (2^grade - 1) / log2(position + 1) over the first k returned
    documents (positions are 1-based). The ideal DCG pools every judged
    document for the query, not just the retrieved candidates, matching
    trec_eval semantics. Returns 0 when the query has no relevant judged
    documents.
    """
    if k < 1:
        raise InvalidConfig(f"k must be >= 1, got {k}")
    dcg = 0.0
    for i, doc in enumerate(ranking[:k]):
        grade = grades.grade(qid, doc)
        if grade:
            dcg += (2**grade - 1) / math.log2(i + 2)
    idcg = 0.0
    ideal = sorted(grades.grades_for(qid), reverse=True)
    for i, grade in enumerate(ideal[:k]):
        if grade:
            idcg += (2**grade - 1) / math.log2(i + 2)
    if idcg == 0.0:
        return 0.0
    return dcg / idcg


def aggregate(values: Iterable[float]) -> CostStats:
    """Arithmetic mean and population SD.

    Population rather than sample SD: reported figures summarize complete
    query sets, and the choice is pinned so golden files stay stable.
    """
    data = list(values)
    if not data:
        raise EmptySample("cannot aggregate an empty sample")
    return CostStats(mean=fmean(data), sd=pstdev(data), n=len(data))


def percent_gain(baseline: float, optimized: float) -> float:
    """Percentage reduction of ``optimized`` relative to ``baseline``.

    Positive when the optimized value is smaller; the sign flips when it
    exceeds the baseline.
    """
    if baseline <= 0:
        raise ZeroBaseline(f"baseline must be positive, got {baseline}")
    return 100.0 * (baseline - optimized) / baseline
