"""Top-k pairwise ranking under an inference-call cost model.

The library ranks candidate lists with a comparison oracle (ground-truth
scores, seeded noise, or a pairwise-prompting LLM backend) using three
instrumented algorithms: heapsort, bubblesort with an optional memo cache,
and batched partial quicksort. Every run is accounted in comparisons and
inference calls, the cost unit that dominates LLM-based reranking.
"""

from importlib.metadata import PackageNotFoundError, version

try:
    __version__ = version("prp-sort")
except PackageNotFoundError:  # running from a source tree
    __version__ = "0.1.0"

from .algorithms import (
    Algorithm,
    AlgoConfig,
    PivotStrategy,
    batch_partition,
    bubblesort_topk,
    heapsort_topk,
    quicksort_topk,
    run_algorithm,
    select_pivot,
)
from .datasets import (
    Dataset,
    Query,
    generate_synthetic,
    load_id_text_tsv,
    load_qrels,
    load_run_file,
    write_dataset_json,
)
from .errors import (
    AggregateMismatch,
    BackendFailure,
    CountOverflow,
    EmptySample,
    FormatError,
    IdenticalPair,
    InvalidConfig,
    MissingText,
    ParseFallbackWarning,
    RankingError,
    UnknownDoc,
    ZeroBaseline,
)
from .experiment import (
    AggregateRow,
    ExperimentConfig,
    ExperimentReport,
    FileSource,
    OracleSpec,
    QueryRow,
    SyntheticSpec,
    compute_aggregates,
    config_from_dict,
    emit_report,
    load_config,
    run_experiment,
)
from .metrics import CostStats, RelevanceMap, aggregate, ndcg_at_k, percent_gain
from .model import (
    Candidate,
    CostLedger,
    DocId,
    PairKey,
    Preference,
    canonical_pair,
    ledger_merge,
)
from .oracles import (
    BatchExecutor,
    ComparisonRequest,
    DEFAULT_PROMPT_TEMPLATE,
    LlmEndpoint,
    LlmOracle,
    MemoizedOracle,
    NoisyOracle,
    Oracle,
    ScoreOracle,
    build_prp_prompt,
    llm_compare_batch,
    parse_preference_label,
)

__all__ = [
    "AggregateMismatch",
    "AggregateRow",
    "AlgoConfig",
    "Algorithm",
    "BackendFailure",
    "BatchExecutor",
    "Candidate",
    "ComparisonRequest",
    "CostLedger",
    "CostStats",
    "CountOverflow",
    "DEFAULT_PROMPT_TEMPLATE",
    "Dataset",
    "DocId",
    "EmptySample",
    "ExperimentConfig",
    "ExperimentReport",
    "FileSource",
    "FormatError",
    "IdenticalPair",
    "InvalidConfig",
    "LlmEndpoint",
    "LlmOracle",
    "MemoizedOracle",
    "MissingText",
    "NoisyOracle",
    "Oracle",
    "OracleSpec",
    "PairKey",
    "ParseFallbackWarning",
    "PivotStrategy",
    "Preference",
    "Query",
    "QueryRow",
    "RankingError",
    "RelevanceMap",
    "ScoreOracle",
    "SyntheticSpec",
    "UnknownDoc",
    "ZeroBaseline",
    "aggregate",
    "batch_partition",
    "bubblesort_topk",
    "build_prp_prompt",
    "canonical_pair",
    "compute_aggregates",
    "config_from_dict",
    "emit_report",
    "generate_synthetic",
    "heapsort_topk",
    "ledger_merge",
    "llm_compare_batch",
    "load_config",
    "load_id_text_tsv",
    "load_qrels",
    "load_run_file",
    "ndcg_at_k",
    "parse_preference_label",
    "percent_gain",
    "quicksort_topk",
    "run_algorithm",
    "run_experiment",
    "select_pivot",
    "write_dataset_json",
]
