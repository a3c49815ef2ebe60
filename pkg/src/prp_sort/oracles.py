"""Comparison oracles and the batching executor.

Oracles answer ordered pairwise relevance questions. The executor is the one
place where groups of independent questions are turned into counted inference
calls: a group of g requests with h cache hits costs ceil((g - h) / batch_size)
calls. Grouping never changes answers, only the ledger.
"""

from __future__ import annotations

import os
import warnings
from dataclasses import dataclass
from random import Random
from typing import Iterable, Mapping, NamedTuple, Sequence

import requests

from .errors import (
    BackendFailure,
    IdenticalPair,
    InvalidConfig,
    MissingText,
    ParseFallbackWarning,
    UnknownDoc,
)
from .model import Candidate, CostLedger, DocId, Preference, canonical_pair
from .seeding import stable_seed


class ComparisonRequest(NamedTuple):
    """One ordered pairwise question: is ``first`` more relevant than ``second``?"""

    first: DocId
    second: DocId


class Oracle:
    """Answers pairwise relevance questions.

    Subclasses must be deterministic for a fixed configuration and seed.
    ``has_cache`` marks oracles whose ``cached`` lookup can answer without an
    inference; the executor uses it to split hits from misses.
    """

    has_cache = False

    def compare(self, req: ComparisonRequest) -> Preference:
        raise NotImplementedError

    def compare_batch(self, reqs: Sequence[ComparisonRequest]) -> list[Preference]:
        """Resolve a chunk of independent requests in one logical call.

        The default answers them one by one; backends with real batch
        support override this.
        """
        return [self.compare(r) for r in reqs]

    def cached(self, req: ComparisonRequest) -> Preference | None:
        """Memo lookup; always None unless the oracle carries a cache."""
        return None


class ScoreOracle(Oracle):
    """Ground-truth judge over a score map.

    The larger score wins; exact ties go to the lexicographically smaller
    id, so the induced order is strict and total.
    """

    def __init__(self, scores: Mapping[DocId, float]):
        self._scores = dict(scores)

    def compare(self, req: ComparisonRequest) -> Preference:
        a, b = req
        if a == b:
            raise IdenticalPair(f"cannot compare document {a!r} with itself")
        scores = self._scores
        try:
            sa = scores[a]
            sb = scores[b]
        except KeyError as exc:
            raise UnknownDoc(f"no score for document {exc.args[0]!r}") from None
        if sa > sb:
            return Preference.FIRST
        if sb > sa:
            return Preference.SECOND
        return Preference.FIRST if a < b else Preference.SECOND


class NoisyOracle(Oracle):
    """Wraps a base oracle and flips its answer with a fixed probability.

    The flip decision is keyed on (seed, canonical pair), not on the query
    event, so the same unordered pair always answers the same way within a
    run even without a cache. flip_probability 0 reproduces the base oracle
    exactly; 1 inverts it everywhere.
    """

    def __init__(self, base: Oracle, flip_probability: float, seed: int):
        if not 0.0 <= flip_probability <= 1.0:
            raise InvalidConfig(f"flip_probability must be in [0, 1], got {flip_probability}")
        self.base = base
        self.flip_probability = flip_probability
        self.seed = seed

    def compare(self, req: ComparisonRequest) -> Preference:
        answer = self.base.compare(req)
        if self.flip_probability == 0.0:
            return answer
        key = canonical_pair(req.first, req.second)
        draw = Random(stable_seed("flip", self.seed, key.lo, key.hi)).random()
        if draw < self.flip_probability:
            return answer.flipped()
        return answer


class MemoizedOracle(Oracle):
    """Memoizes outcomes by unordered pair.

    Stored values answer the canonical orientation (lo vs hi) and are
    re-oriented on the way out, so (a, b) and (b, a) share one entry and the
    base oracle is queried at most once per pair. The memo is only written
    after the base answers, so a failing base leaves it unchanged.
    """

    has_cache = True

    def __init__(self, base: Oracle):
        self.base = base
        self._memo: dict[tuple[DocId, DocId], Preference] = {}

    def cached(self, req: ComparisonRequest) -> Preference | None:
        key = canonical_pair(req.first, req.second)
        stored = self._memo.get((key.lo, key.hi))
        if stored is None:
            return None
        return stored.flipped() if key.flipped else stored

    def compare_with_hit(self, req: ComparisonRequest) -> tuple[Preference, bool]:
        hit = self.cached(req)
        if hit is not None:
            return hit, True
        key = canonical_pair(req.first, req.second)
        answer = self.base.compare(req)
        self._memo[(key.lo, key.hi)] = answer.flipped() if key.flipped else answer
        return answer, False

    def compare(self, req: ComparisonRequest) -> Preference:
        return self.compare_with_hit(req)[0]


class BatchExecutor:
    """Submits independent comparison groups and accounts their cost.

    One executor serves exactly one algorithm run. ``group_misses`` records
    the miss count of every submitted group so the ceiling-sum call law can
    be audited after a run.
    """

    def __init__(self, batch_size: int = 1):
        if batch_size < 1:
            raise InvalidConfig(f"batch_size must be >= 1, got {batch_size}")
        self.batch_size = batch_size
        self.ledger = CostLedger()
        self.group_misses: list[int] = []

    def submit_group(
        self, oracle: Oracle, group: Sequence[ComparisonRequest]
    ) -> list[Preference]:
        """Answer every request in order and charge the ledger.

        Requests must be mutually independent (no request's construction may
        depend on another's outcome). Cache hits are split out first; the
        remaining misses are resolved in chunks of at most batch_size, each
        chunk costing one inference call. A backend failure aborts the group
        with only the completed calls counted.
        """
        ledger = self.ledger
        ledger.comparisons += len(group)
        if oracle.has_cache:
            answers: list[Preference | None] = []
            miss_at: list[int] = []
            misses: list[ComparisonRequest] = []
            for idx, req in enumerate(group):
                hit = oracle.cached(req)
                answers.append(hit)
                if hit is None:
                    miss_at.append(idx)
                    misses.append(req)
            ledger.cache_hits += len(group) - len(misses)
        else:
            answers = [None] * len(group)
            miss_at = list(range(len(group)))
            misses = list(group)
        if misses:
            ledger.batch_groups += 1
            self.group_misses.append(len(misses))
            size = self.batch_size
            for start in range(0, len(misses), size):
                chunk = oracle.compare_batch(misses[start : start + size])
                ledger.inference_calls += 1
                for idx, pref in zip(miss_at[start : start + size], chunk):
                    answers[idx] = pref
        return answers  # type: ignore[return-value]


DEFAULT_PROMPT_TEMPLATE = (
    "Given a query and two passages, decide which passage is more relevant "
    "to the query.\n"
    "Query: {query}\n"
    "Passage A: {passage_a}\n"
    "Passage B: {passage_b}\n"
    'Answer "Passage A" or "Passage B".'
)


def build_prp_prompt(
    query: str, a: Candidate, b: Candidate, template: str | None = None
) -> str:
    """Instantiate the pairwise prompt template for one comparison.

    The placeholders {query}, {passage_a} and {passage_b} are replaced
    verbatim and nothing else is interpreted, so passages may contain braces.
    """
    for cand in (a, b):
        if cand.text is None:
            raise MissingText(f"candidate {cand.doc!r} has no passage text")
    tpl = DEFAULT_PROMPT_TEMPLATE if template is None else template
    return (
        tpl.replace("{query}", query)
        .replace("{passage_a}", a.text or "")
        .replace("{passage_b}", b.text or "")
    )


_LABEL_A = "passage a"
_LABEL_B = "passage b"


def parse_preference_label(completion: str) -> tuple[Preference, bool]:
    """Map a completion to a Preference by its earliest label token.

    Returns (preference, parsed). Unparseable completions map to
    (FIRST, False); the caller decides how loudly to complain.
    """
    lowered = completion.lower()
    pos_a = lowered.find(_LABEL_A)
    pos_b = lowered.find(_LABEL_B)
    if pos_a >= 0 and (pos_b < 0 or pos_a <= pos_b):
        return Preference.FIRST, True
    if pos_b >= 0:
        return Preference.SECOND, True
    return Preference.FIRST, False


@dataclass(frozen=True, slots=True)
class LlmEndpoint:
    """HTTP text-completion backend configuration.

    The wire format is deliberately minimal: POST a JSON body
    ``{"model": ..., "prompts": [...]}`` and read ``{"completions": [...]}``
    of equal length and order. Backends with a different payload schema are
    adapted behind this shape. The API key is read from the environment,
    never from config files.
    """

    url: str
    model: str = "default"
    api_key_env: str = "PRP_SORT_API_KEY"
    timeout_s: float = 30.0
    prompt_template: str | None = None
    retries: int = 1


def llm_compare_batch(endpoint: LlmEndpoint, prompts: Sequence[str]) -> list[Preference]:
    """Resolve a batch of rendered prompts as one logical inference call.

    Transport errors are retried up to endpoint.retries times before raising
    BackendFailure; HTTP status or payload problems fail immediately.
    Completions without a recognizable label fall back to FIRST with a
    ParseFallbackWarning, which keeps long sweeps running.
    """
    headers = {}
    api_key = os.environ.get(endpoint.api_key_env, "")
    if api_key:
        headers["Authorization"] = f"Bearer {api_key}"
    payload = {"model": endpoint.model, "prompts": list(prompts)}
    last_error: Exception | None = None
    response = None
    for _ in range(max(0, endpoint.retries) + 1):
        try:
            response = requests.post(
                endpoint.url, json=payload, headers=headers, timeout=endpoint.timeout_s
            )
            break
        except requests.RequestException as exc:
            last_error = exc
    if response is None:
        raise BackendFailure(f"POST {endpoint.url} failed: {last_error}") from last_error
    if response.status_code != 200:
        raise BackendFailure(f"POST {endpoint.url} returned HTTP {response.status_code}")
    try:
        completions = response.json()["completions"]
    except (ValueError, KeyError, TypeError) as exc:
        raise BackendFailure(f"malformed response from {endpoint.url}: {exc!r}") from exc
    if not isinstance(completions, list) or len(completions) != len(prompts):
        raise BackendFailure(
            f"expected {len(prompts)} completions from {endpoint.url}, "
            f"got {len(completions) if isinstance(completions, list) else completions!r}"
        )
    preferences = []
    for completion in completions:
        pref, parsed = parse_preference_label(str(completion))
        if not parsed:
            warnings.warn(
                f"completion {str(completion)[:80]!r} has no passage label; "
                "falling back to First",
                ParseFallbackWarning,
                stacklevel=2,
            )
        preferences.append(pref)
    return preferences


class LlmOracle(Oracle):
    """Pairwise-prompting judge over an HTTP completion backend.

    Each comparison issues a single-order prompt that names the request's
    first document as Passage A; both orders are never queried for one
    comparison, matching one-inference-per-comparison accounting.
    """

    def __init__(self, endpoint: LlmEndpoint, query: str, candidates: Iterable[Candidate]):
        self.endpoint = endpoint
        self.query = query
        self._by_doc: dict[DocId, Candidate] = {}
        for cand in candidates:
            if cand.text is None:
                raise MissingText(f"candidate {cand.doc!r} has no passage text")
            self._by_doc[cand.doc] = cand

    def compare(self, req: ComparisonRequest) -> Preference:
        return self.compare_batch([req])[0]

    def compare_batch(self, reqs: Sequence[ComparisonRequest]) -> list[Preference]:
        prompts = []
        for req in reqs:
            try:
                a = self._by_doc[req.first]
                b = self._by_doc[req.second]
            except KeyError as exc:
                raise UnknownDoc(f"no passage for document {exc.args[0]!r}") from None
            prompts.append(build_prp_prompt(self.query, a, b, self.endpoint.prompt_template))
        return llm_compare_batch(self.endpoint, prompts)
