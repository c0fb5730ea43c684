"""Masked-token prediction over a pluggable backend, plus correctness judging.

A question becomes a MaskedQuery: token strings with exactly one mask slot.
When the gold answer survives WordPiece as a single in-vocab piece the whole
question is WordPiece-tokenized; otherwise the query falls back to whole-word
tokens so the mask still aligns with one answer unit. Either way prediction
fills one slot, and a gold answer that needs several pieces can never match a
single predicted token — that failure mode is kept on purpose, not patched.

Correctness is uncased exact string equality after trimming. Scores ride
along in candidates but never influence the verdict.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping, Protocol, Sequence

from . import remote
from .clozegen import MASK_PLACEHOLDER, ClozeQuestion
from .errors import DataError, TransportError
from .tokenizer import Vocab, basic_tokenize, fallback_tokenize, is_single_piece, wordpiece


@dataclass(frozen=True)
class Candidate:
    token: str
    score: float


@dataclass(frozen=True)
class MaskedQuery:
    """Token strings for one question with exactly one mask slot."""

    claim_id: int
    question_index: int
    tokens: tuple[str, ...]
    mask_position: int
    top_k: int = 1
    mask_token: str = "[MASK]"

    def __post_init__(self) -> None:
        occurrences = [i for i, token in enumerate(self.tokens) if token == self.mask_token]
        if occurrences != [self.mask_position]:
            raise DataError(
                f"claim {self.claim_id} question {self.question_index}: "
                f"mask token must appear exactly once at position {self.mask_position}"
            )

    @property
    def wire_id(self) -> str:
        return f"{self.claim_id}:{self.question_index}"


@dataclass(frozen=True)
class AnswerResult:
    """Prediction outcome for one question; ``predicted`` is None when answering failed."""

    claim_id: int
    question_index: int
    predicted: str | None
    candidates: tuple[Candidate, ...]
    gold: str
    correct: bool

    @property
    def failed(self) -> bool:
        return self.predicted is None

    def to_payload(self) -> dict[str, Any]:
        return {
            "claim_id": self.claim_id,
            "question_index": self.question_index,
            "predicted": self.predicted,
            "gold": self.gold,
            "correct": self.correct,
        }

    @classmethod
    def from_payload(cls, payload: Mapping[str, Any]) -> "AnswerResult":
        try:
            return cls(
                claim_id=payload["claim_id"],
                question_index=payload["question_index"],
                predicted=payload["predicted"],
                candidates=(),
                gold=payload["gold"],
                correct=payload["correct"],
            )
        except KeyError as exc:
            raise DataError(f"answer record missing field {exc.args[0]!r}") from exc


def normalize_token(text: str) -> str:
    return text.strip().lower()


def judge(predicted: str, gold: str) -> bool:
    """Uncased exact-match correctness; multi-piece golds simply never match."""
    return normalize_token(predicted) == normalize_token(gold)


def build_query(question: ClozeQuestion, vocab: Vocab, top_k: int = 1) -> MaskedQuery:
    """Tokenize a question into a MaskedQuery with one mask slot.

    The placeholder is split out first so punctuation handling never touches
    it. The gold answer decides the tokenizer: a single in-vocab piece keeps
    the WordPiece path, anything else switches the whole question to
    whole-word fallback tokens (sent verbatim; the serving side owns
    vocabulary-index resolution).
    """
    if question.question_text.count(MASK_PLACEHOLDER) != 1:
        raise DataError(
            f"claim {question.claim_id} question {question.question_index}: "
            f"question text must contain exactly one {MASK_PLACEHOLDER!r}"
        )
    left, right = question.question_text.split(MASK_PLACEHOLDER)
    if is_single_piece(question.answer_text, vocab):
        left_tokens: list[str] = []
        for word in basic_tokenize(left):
            left_tokens.extend(wordpiece(word, vocab))
        right_tokens: list[str] = []
        for word in basic_tokenize(right):
            right_tokens.extend(wordpiece(word, vocab))
    else:
        left_tokens = fallback_tokenize(left)
        right_tokens = fallback_tokenize(right)
    tokens = (*left_tokens, vocab.mask_token, *right_tokens)
    mask_position = len(left_tokens)
    if tokens.count(vocab.mask_token) != 1:
        raise RuntimeError("internal error: mask slot lost during tokenization")
    return MaskedQuery(
        claim_id=question.claim_id,
        question_index=question.question_index,
        tokens=tokens,
        mask_position=mask_position,
        top_k=top_k,
        mask_token=vocab.mask_token,
    )


class AnswerBackend(Protocol):
    """One batch of queries in, one candidate list per query out, same order."""

    def predict(self, queries: Sequence[MaskedQuery]) -> list[list[Candidate]]: ...


@dataclass(frozen=True)
class OracleBackend:
    """Deterministic backend answering from a (claim_id, question_index) -> token map."""

    answer_key: Mapping[tuple[int, int], str]

    def predict(self, queries: Sequence[MaskedQuery]) -> list[list[Candidate]]:
        results = []
        for query in queries:
            key = (query.claim_id, query.question_index)
            if key not in self.answer_key:
                raise DataError(f"answer key does not cover claim {key[0]} question {key[1]}")
            results.append([Candidate(token=self.answer_key[key], score=1.0)])
        return results


def gold_answer_key(questions: Sequence[ClozeQuestion]) -> dict[tuple[int, int], str]:
    """Answer key mapping every question to its own gold answer."""
    return {(q.claim_id, q.question_index): q.answer_text for q in questions}


def load_answer_key(path: str | Path) -> dict[tuple[int, int], str]:
    """Load a scripted answer key: JSON object of "claim_id:question_index" -> token."""
    with open(path, "r", encoding="utf-8") as handle:
        raw = json.load(handle)
    if not isinstance(raw, dict):
        raise DataError(f"{path}: answer key must be a JSON object")
    key: dict[tuple[int, int], str] = {}
    for composite, token in raw.items():
        try:
            claim_part, _, index_part = composite.partition(":")
            key[(int(claim_part), int(index_part))] = str(token)
        except ValueError as exc:
            raise DataError(f"{path}: bad answer key entry {composite!r}") from exc
    return key


@dataclass(frozen=True)
class RemoteBackend:
    """Client for a masked-LM service speaking the batch wire protocol.

    ``predict`` sends one batch per call; transport failures are retried
    internally with exponential backoff before raising TransportError.
    Responses are matched back to queries by id, must echo mask positions,
    and must carry non-empty candidate lists sorted by descending score.
    """

    endpoint: str
    timeout: float = remote.DEFAULT_TIMEOUT
    batch_size: int = 16
    retries: int = remote.DEFAULT_RETRIES
    backoff: float = remote.DEFAULT_BACKOFF

    def predict(self, queries: Sequence[MaskedQuery]) -> list[list[Candidate]]:
        payload = {
            "queries": [
                {
                    "id": query.wire_id,
                    "tokens": list(query.tokens),
                    "mask_position": query.mask_position,
                    "top_k": query.top_k,
                }
                for query in queries
            ]
        }
        body = remote.post_json(
            self.endpoint, payload, timeout=self.timeout, retries=self.retries, backoff=self.backoff
        )
        raw_results = body.get("results")
        if not isinstance(raw_results, list) or len(raw_results) != len(queries):
            raise DataError(f"{self.endpoint}: expected {len(queries)} results, got {raw_results!r}")
        by_id: dict[str, dict[str, Any]] = {}
        for entry in raw_results:
            if not isinstance(entry, dict) or "id" not in entry:
                raise DataError(f"{self.endpoint}: malformed result entry {entry!r}")
            if entry["id"] in by_id:
                raise DataError(f"{self.endpoint}: duplicate result id {entry['id']!r}")
            by_id[entry["id"]] = entry
        output = []
        for query in queries:
            entry = by_id.get(query.wire_id)
            if entry is None:
                raise DataError(f"{self.endpoint}: no result for request id {query.wire_id!r}")
            if entry.get("mask_position") != query.mask_position:
                raise DataError(
                    f"{self.endpoint}: request {query.wire_id!r} mask position mismatch: "
                    f"sent {query.mask_position}, got {entry.get('mask_position')!r}"
                )
            raw_candidates = entry.get("candidates")
            if not isinstance(raw_candidates, list) or not raw_candidates:
                raise DataError(f"{self.endpoint}: request {query.wire_id!r} returned no candidates")
            if len(raw_candidates) > query.top_k:
                raise DataError(
                    f"{self.endpoint}: request {query.wire_id!r} returned {len(raw_candidates)} "
                    f"candidates for top_k={query.top_k}"
                )
            candidates = []
            for raw in raw_candidates:
                if not isinstance(raw, dict) or "token" not in raw or "score" not in raw:
                    raise DataError(f"{self.endpoint}: request {query.wire_id!r} malformed candidate {raw!r}")
                candidates.append(Candidate(token=str(raw["token"]), score=float(raw["score"])))
            if any(candidates[i].score < candidates[i + 1].score for i in range(len(candidates) - 1)):
                raise DataError(f"{self.endpoint}: request {query.wire_id!r} candidates not sorted by score")
            output.append(candidates)
        return output


@dataclass
class AnswerRun:
    """Results of answering a question set, failures included.

    ``results`` covers every input question in (claim_id, question_index)
    order; a query whose batch exhausted its retries appears with
    ``predicted=None`` and its claim id recorded in ``failed_claims``.
    """

    results: list[AnswerResult]
    failed_claims: set[int] = field(default_factory=set)


def _judge_batch(queries: Sequence[MaskedQuery], candidate_lists: Sequence[list[Candidate]], gold: Mapping[tuple[int, int], str]) -> list[AnswerResult]:
    results = []
    for query, candidates in zip(queries, candidate_lists):
        if not candidates:
            raise DataError(f"empty candidate list for claim {query.claim_id} question {query.question_index}")
        predicted = candidates[0].token
        gold_text = gold[(query.claim_id, query.question_index)]
        results.append(
            AnswerResult(
                claim_id=query.claim_id,
                question_index=query.question_index,
                predicted=predicted,
                candidates=tuple(candidates),
                gold=gold_text,
                correct=judge(predicted, gold_text),
            )
        )
    return results


def answer_questions(
    questions: Sequence[ClozeQuestion],
    vocab: Vocab,
    backend: AnswerBackend,
    *,
    top_k: int = 1,
    jobs: int = 1,
) -> AnswerRun:
    """Answer every question through the backend, batch by batch.

    Batches run in parallel up to ``jobs`` workers; output order is always
    (claim_id, question_index) regardless of job count. A batch that still
    fails transport after the backend's retries marks its claims
    ``answer_failed`` instead of aborting the run.
    """
    ordered = sorted(questions, key=lambda q: (q.claim_id, q.question_index))
    queries = [build_query(question, vocab, top_k=top_k) for question in ordered]
    gold = {(q.claim_id, q.question_index): q.answer_text for q in ordered}

    batch_size = getattr(backend, "batch_size", None) or max(len(queries), 1)
    batches = [queries[i : i + batch_size] for i in range(0, len(queries), batch_size)]

    def run_batch(batch: list[MaskedQuery]) -> list[AnswerResult] | TransportError:
        try:
            return _judge_batch(batch, backend.predict(batch), gold)
        except TransportError as exc:
            return exc

    if jobs > 1 and len(batches) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(run_batch, batches))
    else:
        outcomes = [run_batch(batch) for batch in batches]

    run = AnswerRun(results=[])
    for batch, outcome in zip(batches, outcomes):
        if isinstance(outcome, TransportError):
            for query in batch:
                run.failed_claims.add(query.claim_id)
                run.results.append(
                    AnswerResult(
                        claim_id=query.claim_id,
                        question_index=query.question_index,
                        predicted=None,
                        candidates=(),
                        gold=gold[(query.claim_id, query.question_index)],
                        correct=False,
                    )
                )
        else:
            run.results.extend(outcome)
    run.results.sort(key=lambda result: (result.claim_id, result.question_index))
    return run
