"""Turn claims into masked-entity questions, one question per entity span.

Masking is recorded by span; the stored claim text is never mutated. Each
question hides exactly one entity behind the placeholder while every other
entity stays visible, so substituting the answer back into the question
reconstructs the original claim byte-for-byte.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Mapping, Sequence

from .dataset import ClaimRecord
from .errors import DataError
from .tagger import EntitySpan, EntityType, validate_spans

MASK_PLACEHOLDER = "[MASK]"


@dataclass(frozen=True)
class ClozeQuestion:
    """A claim with one entity masked, plus the gold answer and its span."""

    claim_id: int
    question_index: int
    question_text: str
    answer_text: str
    etype: EntityType
    start: int
    end: int

    def reconstruct(self) -> str:
        """Substitute the answer back into the question (the original claim)."""
        return self.question_text.replace(MASK_PLACEHOLDER, self.answer_text, 1)

    def to_payload(self) -> dict[str, Any]:
        return {
            "claim_id": self.claim_id,
            "question_index": self.question_index,
            "question_text": self.question_text,
            "answer_text": self.answer_text,
            "etype": self.etype.value,
            "start": self.start,
            "end": self.end,
        }

    @classmethod
    def from_payload(cls, payload: Mapping[str, Any]) -> "ClozeQuestion":
        try:
            return cls(
                claim_id=payload["claim_id"],
                question_index=payload["question_index"],
                question_text=payload["question_text"],
                answer_text=payload["answer_text"],
                etype=EntityType.coerce(payload["etype"]),
                start=payload["start"],
                end=payload["end"],
            )
        except KeyError as exc:
            raise DataError(f"question record missing field {exc.args[0]!r}") from exc


def generate(claim: ClaimRecord, spans: Sequence[EntitySpan]) -> list[ClozeQuestion]:
    """Produce one question per span; an empty span list yields no questions.

    A claim whose text already contains the placeholder cannot be masked
    unambiguously and is rejected.
    """
    validate_spans(claim.claim, spans, claim_id=claim.id)
    if MASK_PLACEHOLDER in claim.claim:
        raise DataError(f"claim {claim.id}: text contains the reserved placeholder {MASK_PLACEHOLDER!r}")
    questions = []
    for index, span in enumerate(spans):
        question_text = claim.claim[: span.start] + MASK_PLACEHOLDER + claim.claim[span.end :]
        questions.append(
            ClozeQuestion(
                claim_id=claim.id,
                question_index=index,
                question_text=question_text,
                answer_text=span.text,
                etype=span.etype,
                start=span.start,
                end=span.end,
            )
        )
    return questions


def _lower_median(values: list[int]) -> int:
    """Median taking the lower middle value on even counts (stays integer-valued)."""
    ordered = sorted(values)
    return ordered[(len(ordered) - 1) // 2]


@dataclass(frozen=True)
class ConversionStats:
    """Question-generation outcome counts over one claims set.

    ``conversion_accuracy`` is the exact percentage of claims that produced
    at least one question. Medians are None when their population is empty;
    ``median_questions_per_claim`` is taken over converted claims only, and
    ``median_questions_all_claims`` over every claim (zeros included).
    """

    total_claims: int
    converted_claims: int
    total_questions: int
    median_questions_per_claim: int | None
    median_questions_all_claims: int | None

    @property
    def conversion_accuracy(self) -> Fraction | None:
        if self.total_claims == 0:
            return None
        return Fraction(100 * self.converted_claims, self.total_claims)


def conversion_stats(claims: Sequence[ClaimRecord], questions: Sequence[ClozeQuestion]) -> ConversionStats:
    """Aggregate per-claim question counts into conversion statistics."""
    counts = {claim.id: 0 for claim in claims}
    for question in questions:
        if question.claim_id not in counts:
            raise DataError(f"question references unknown claim id {question.claim_id}")
        counts[question.claim_id] += 1
    converted = [count for count in counts.values() if count > 0]
    return ConversionStats(
        total_claims=len(claims),
        converted_claims=len(converted),
        total_questions=len(questions),
        median_questions_per_claim=_lower_median(converted) if converted else None,
        median_questions_all_claims=_lower_median(list(counts.values())) if counts else None,
    )
