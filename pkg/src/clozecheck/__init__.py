"""clozecheck: claims in, masked-entity questions out, verdicts by exact threshold.

The pipeline has three stages. ``genq`` tags named entities in each claim
and masks them one at a time into fill-in-the-blank questions. ``answer``
predicts each masked token through a pluggable backend and judges the
prediction against the hidden entity. ``classify`` turns per-claim
correctness fractions into SUPPORTS / MANUAL_REVIEW labels by exact rational
comparison against a threshold, and reports conversion and accuracy metrics.
"""

from .answerer import (
    AnswerResult,
    AnswerRun,
    Candidate,
    MaskedQuery,
    OracleBackend,
    RemoteBackend,
    answer_questions,
    build_query,
    gold_answer_key,
    judge,
    load_answer_key,
)
from .classify import (
    Label,
    Objective,
    PRPoint,
    Threshold,
    ThresholdOrigin,
    Verdict,
    assign_label,
    derive_threshold,
    label_accuracy_supports,
    pr_curve,
    score_claim,
)
from .clozegen import MASK_PLACEHOLDER, ClozeQuestion, ConversionStats, conversion_stats, generate
from .config import BackendConfig, PipelineConfig, TaggerConfig, load_config, validate_config
from .dataset import ClaimRecord, GoldLabel, load_claims, read_stage, write_stage
from .errors import ClozeCheckError, ConfigError, DataError, TransportError
from .pipeline import run_all, run_answer, run_classify, run_derive, run_genq
from .report import EvalReport, build_report, format_pct
from .tagger import EntitySpan, EntityType, RemoteTagger, RuleTagger, validate_spans
from .tokenizer import (
    TokenSequence,
    Vocab,
    basic_tokenize,
    fallback_tokenize,
    is_single_piece,
    tokenize,
    wordpiece,
)

__version__ = "0.1.0"

__all__ = [
    "AnswerResult",
    "AnswerRun",
    "Candidate",
    "ClaimRecord",
    "ClozeCheckError",
    "ClozeQuestion",
    "ConfigError",
    "ConversionStats",
    "DataError",
    "EntitySpan",
    "EntityType",
    "EvalReport",
    "GoldLabel",
    "Label",
    "MASK_PLACEHOLDER",
    "MaskedQuery",
    "Objective",
    "OracleBackend",
    "PRPoint",
    "PipelineConfig",
    "BackendConfig",
    "TaggerConfig",
    "RemoteBackend",
    "RemoteTagger",
    "RuleTagger",
    "Threshold",
    "ThresholdOrigin",
    "TokenSequence",
    "TransportError",
    "Verdict",
    "Vocab",
    "answer_questions",
    "assign_label",
    "basic_tokenize",
    "build_query",
    "build_report",
    "conversion_stats",
    "derive_threshold",
    "fallback_tokenize",
    "format_pct",
    "generate",
    "gold_answer_key",
    "is_single_piece",
    "judge",
    "label_accuracy_supports",
    "load_answer_key",
    "load_claims",
    "load_config",
    "pr_curve",
    "read_stage",
    "run_all",
    "run_answer",
    "run_classify",
    "run_derive",
    "run_genq",
    "score_claim",
    "tokenize",
    "validate_config",
    "validate_spans",
    "wordpiece",
    "write_stage",
]
