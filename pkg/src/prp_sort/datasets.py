"""Dataset ingestion and generation.

Real candidates arrive as TREC run files (with qrels for judgments and
optional id-to-text TSVs for LLM use); synthetic datasets are generated with
seeded, strictly ordered ground-truth scores for desk-scale cost studies.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass
from random import Random

from .errors import FormatError, InvalidConfig
from .metrics import RelevanceMap
from .model import Candidate, DocId
from .seeding import stable_seed


@dataclass
class Query:
    """One query's candidate list, in first-stage order."""

    qid: str
    text: str | None
    candidates: list[Candidate]


@dataclass
class Dataset:
    """Queries plus optional judgments and (synthetic mode) ground truth."""

    queries: list[Query]
    grades: RelevanceMap | None = None
    ground_truth_scores: dict[str, dict[DocId, float]] | None = None


def load_run_file(path: str, depth: int = 100) -> list[Query]:
    """Parse a 6-column TREC run file into per-query candidate lists.

    Columns: qid Q0 docid rank score tag, whitespace separated. Candidates
    are ordered by ascending rank and truncated to ``depth`` per query.
    Duplicate (qid, docid) pairs and malformed lines raise FormatError with
    the offending 1-based line number; blank lines are skipped.
    """
    if depth < 1:
        raise InvalidConfig(f"depth must be >= 1, got {depth}")
    per_query: dict[str, list[tuple[int, Candidate]]] = {}
    seen: set[tuple[str, str]] = set()
    with open(path, encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, start=1):
            line = raw.strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 6:
                raise FormatError(f"expected 6 columns, found {len(parts)}", lineno)
            qid, marker, doc, rank_text, score_text, _tag = parts
            if marker != "Q0":
                raise FormatError(f"expected literal 'Q0', found {marker!r}", lineno)
            try:
                rank = int(rank_text)
            except ValueError:
                raise FormatError(f"rank {rank_text!r} is not an integer", lineno) from None
            try:
                score = float(score_text)
            except ValueError:
                raise FormatError(f"score {score_text!r} is not a number", lineno) from None
            if (qid, doc) in seen:
                raise FormatError(f"duplicate candidate {doc!r} for query {qid!r}", lineno)
            seen.add((qid, doc))
            per_query.setdefault(qid, []).append(
                (rank, Candidate(doc=doc, first_stage_score=score))
            )
    queries = []
    for qid, ranked in per_query.items():
        ranked.sort(key=lambda entry: entry[0])
        queries.append(Query(qid=qid, text=None, candidates=[c for _, c in ranked[:depth]]))
    return queries


def load_qrels(path: str) -> RelevanceMap:
    """Parse 4-column TREC qrels: qid iteration docid grade.

    Grades must be integers; negative grades are clamped to 0 with a
    warning. A repeated (qid, docid) line overwrites the earlier grade.
    """
    grades = RelevanceMap()
    with open(path, encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, start=1):
            line = raw.strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 4:
                raise FormatError(f"expected 4 columns, found {len(parts)}", lineno)
            qid, _iteration, doc, grade_text = parts
            try:
                grade = int(grade_text)
            except ValueError:
                raise FormatError(f"grade {grade_text!r} is not an integer", lineno) from None
            if grade < 0:
                warnings.warn(
                    f"{path}:{lineno}: negative grade {grade} clamped to 0", stacklevel=2
                )
                grade = 0
            grades.by_query.setdefault(qid, {})[doc] = grade
    return grades


def load_id_text_tsv(path: str) -> dict[str, str]:
    """Parse an id<TAB>text map (used for query texts and passages)."""
    texts: dict[str, str] = {}
    with open(path, encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, start=1):
            line = raw.rstrip("\n")
            if not line.strip():
                continue
            if "\t" not in line:
                raise FormatError("expected id<TAB>text", lineno)
            key, text = line.split("\t", 1)
            texts[key] = text
    return texts


# Cumulative score-rank quantiles for synthetic graded relevance:
# top 10% grade 3, next 20% grade 2, next 30% grade 1, remainder 0.
_GRADE_CUTOFFS = ((10, 3), (30, 2), (60, 1))


def generate_synthetic(num_queries: int, n: int, master_seed: int) -> Dataset:
    """Build a seeded synthetic dataset of num_queries queries, n candidates each.

    Each query's ground-truth scores are a random permutation of the equally
    spaced values 1/n .. 1.0, so every pair is strictly ordered. Graded
    relevance follows score quantiles so NDCG is computable. The per-query
    seed depends only on (master_seed, qid); adding queries never perturbs
    existing ones.
    """
    if num_queries < 1 or n < 1:
        raise InvalidConfig("num_queries and n must both be >= 1")
    qwidth = max(4, len(str(num_queries)))
    dwidth = max(4, len(str(n)))
    docs = [f"d{j:0{dwidth}d}" for j in range(n)]
    values = [(j + 1) / n for j in range(n)]
    cutoffs = [((n * pct) // 100, grade) for pct, grade in _GRADE_CUTOFFS]
    queries = []
    grades = RelevanceMap()
    truth: dict[str, dict[DocId, float]] = {}
    for qi in range(1, num_queries + 1):
        qid = f"q{qi:0{qwidth}d}"
        shuffled = list(values)
        Random(stable_seed("synth", master_seed, qid)).shuffle(shuffled)
        scores = dict(zip(docs, shuffled))
        truth[qid] = scores
        by_rank = sorted(docs, key=lambda d: -scores[d])
        query_grades = {}
        for position, doc in enumerate(by_rank):
            grade = 0
            for cutoff, value in cutoffs:
                if position < cutoff:
                    grade = value
                    break
            query_grades[doc] = grade
        grades.by_query[qid] = query_grades
        queries.append(Query(qid=qid, text=None, candidates=[Candidate(doc=d) for d in docs]))
    return Dataset(queries=queries, grades=grades, ground_truth_scores=truth)


def write_dataset_json(dataset: Dataset, path: str) -> None:
    """Serialize a dataset (candidates, scores, grades) as a JSON document."""
    payload = {
        "queries": [
            {
                "qid": q.qid,
                "text": q.text,
                "candidates": [c.doc for c in q.candidates],
                "scores": dataset.ground_truth_scores.get(q.qid, {})
                if dataset.ground_truth_scores
                else {},
                "grades": dataset.grades.by_query.get(q.qid, {}) if dataset.grades else {},
            }
            for q in dataset.queries
        ]
    }
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(payload, handle, indent=2, sort_keys=False)
        handle.write("\n")
