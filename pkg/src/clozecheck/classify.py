"""Correctness scoring and threshold classification in exact rational arithmetic.

A claim's score is the fraction of its questions answered correctly, held as
an exact ``Fraction`` — never a rounded float. Labels compare that rational
against an exact decimal threshold, so knife-edge cases like 2/3 vs 0.67 and
3/4 vs 0.76 resolve the way the comparison s >= phi literally says (both are
strictly below, hence MANUAL_REVIEW). Thresholds can also be given as plain
fractions ("3/4") for callers who want k-of-N semantics instead.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from typing import Any, Mapping, Sequence

from .answerer import AnswerResult
from .dataset import GoldLabel
from .errors import ConfigError, DataError


class Label(enum.Enum):
    SUPPORTS = "SUPPORTS"
    MANUAL_REVIEW = "MANUAL_REVIEW"


class ThresholdOrigin(enum.Enum):
    PRESET = "preset"
    DERIVED = "derived"


# Shipped threshold presets; both are exact decimals.
PRESET_PHI_STRINGS = ("0.76", "0.67")


@dataclass(frozen=True)
class Threshold:
    phi: Fraction
    origin: ThresholdOrigin = ThresholdOrigin.PRESET

    def __post_init__(self) -> None:
        if not (0 <= self.phi <= 1):
            raise ConfigError(f"threshold must lie in [0, 1], got {self.phi}")

    @classmethod
    def preset(cls, text: str) -> "Threshold":
        """Parse an exact decimal ("0.76") or fraction ("3/4") threshold."""
        try:
            phi = Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise ConfigError(f"cannot parse threshold {text!r}") from exc
        return cls(phi=phi, origin=ThresholdOrigin.PRESET)

    @property
    def display(self) -> str:
        # Prefer the exact decimal form when one exists (denominator 2^a * 5^b).
        reduced = self.phi.denominator
        for factor in (2, 5):
            while reduced % factor == 0:
                reduced //= factor
        if reduced == 1:
            return str(Decimal(self.phi.numerator) / Decimal(self.phi.denominator))
        return f"{self.phi.numerator}/{self.phi.denominator}"


def score_claim(answers: Sequence[AnswerResult]) -> tuple[int, int, Fraction]:
    """Count correct answers for one claim and return (n_correct, n_questions, score)."""
    if not answers:
        raise DataError("cannot score a claim with no answered questions")
    claim_ids = {answer.claim_id for answer in answers}
    if len(claim_ids) != 1:
        raise DataError(f"answers span multiple claims: {sorted(claim_ids)}")
    n_questions = len(answers)
    n_correct = sum(1 for answer in answers if answer.correct)
    return n_correct, n_questions, Fraction(n_correct, n_questions)


def assign_label(score: Fraction, threshold: Threshold) -> Label:
    """SUPPORTS iff score >= phi, compared exactly; otherwise MANUAL_REVIEW."""
    if not (0 <= score <= 1):
        raise DataError(f"score must lie in [0, 1], got {score}")
    return Label.SUPPORTS if score >= threshold.phi else Label.MANUAL_REVIEW


@dataclass(frozen=True)
class Verdict:
    """Scored outcome for one claim; the score is the exact rational n_correct/n_questions."""

    claim_id: int
    n_correct: int
    n_questions: int
    score: Fraction
    label: Label

    @classmethod
    def build(cls, claim_id: int, answers: Sequence[AnswerResult], threshold: Threshold) -> "Verdict":
        n_correct, n_questions, score = score_claim(answers)
        return cls(
            claim_id=claim_id,
            n_correct=n_correct,
            n_questions=n_questions,
            score=score,
            label=assign_label(score, threshold),
        )

    def to_payload(self) -> dict[str, Any]:
        return {
            "claim_id": self.claim_id,
            "n_correct": self.n_correct,
            "n_questions": self.n_questions,
            "score_num": self.score.numerator,
            "score_den": self.score.denominator,
            "label": self.label.value,
        }

    @classmethod
    def from_payload(cls, payload: Mapping[str, Any]) -> "Verdict":
        try:
            return cls(
                claim_id=payload["claim_id"],
                n_correct=payload["n_correct"],
                n_questions=payload["n_questions"],
                score=Fraction(payload["score_num"], payload["score_den"]),
                label=Label(payload["label"]),
            )
        except (KeyError, ValueError, ZeroDivisionError) as exc:
            raise DataError(f"bad verdict record {payload!r}: {exc}") from exc


@dataclass(frozen=True)
class PRPoint:
    """Precision/recall/F1 at one candidate threshold, all exact rationals."""

    phi_candidate: Fraction
    precision: Fraction
    recall: Fraction
    f1: Fraction
    supports_count: int

    def to_payload(self) -> dict[str, Any]:
        return {
            "phi_num": self.phi_candidate.numerator,
            "phi_den": self.phi_candidate.denominator,
            "precision": float(self.precision),
            "recall": float(self.recall),
            "f1": float(self.f1),
            "supports_count": self.supports_count,
        }


class ObjectiveKind(enum.Enum):
    MAX_F1 = "max_f1"
    PRECISION_AT_LEAST = "precision_at_least"
    RECALL_AT_LEAST = "recall_at_least"


@dataclass(frozen=True)
class Objective:
    kind: ObjectiveKind
    bound: Fraction | None = None

    @classmethod
    def parse(cls, text: str) -> "Objective":
        """Parse "max_f1", "precision_at_least:0.9", or "recall_at_least:0.8"."""
        name, _, raw_bound = text.partition(":")
        try:
            kind = ObjectiveKind(name.strip())
        except ValueError as exc:
            raise ConfigError(f"unknown threshold objective {text!r}") from exc
        if kind is ObjectiveKind.MAX_F1:
            if raw_bound:
                raise ConfigError(f"objective {name!r} takes no bound")
            return cls(kind=kind)
        try:
            bound = Fraction(raw_bound.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ConfigError(f"objective {text!r} needs a numeric bound") from exc
        if not (0 <= bound <= 1):
            raise ConfigError(f"objective bound must lie in [0, 1], got {raw_bound!r}")
        return cls(kind=kind, bound=bound)


def pr_curve(scored: Sequence[tuple[Fraction, bool]]) -> list[PRPoint]:
    """Precision-recall points at every achievable threshold.

    Candidates are 0, every distinct achieved score, and a point just past 1
    where nothing can be labeled SUPPORTS. Gold SUPPORTS is the positive
    class. With zero predicted positives precision is defined as 1 (no false
    positives were made).
    """
    total_positive = sum(1 for _, positive in scored if positive)
    candidates = sorted({Fraction(0), *(score for score, _ in scored)})
    candidates.append(Fraction(101, 100))
    points = []
    for phi in candidates:
        predicted = [(score, positive) for score, positive in scored if score >= phi]
        true_positive = sum(1 for _, positive in predicted if positive)
        precision = Fraction(true_positive, len(predicted)) if predicted else Fraction(1)
        recall = Fraction(true_positive, total_positive) if total_positive else Fraction(0)
        f1 = 2 * precision * recall / (precision + recall) if precision + recall > 0 else Fraction(0)
        points.append(
            PRPoint(
                phi_candidate=phi,
                precision=precision,
                recall=recall,
                f1=f1,
                supports_count=len(predicted),
            )
        )
    return points


def derive_threshold(
    scored: Sequence[tuple[Fraction, bool]],
    objective: Objective,
) -> tuple[Threshold, list[PRPoint]]:
    """Pick the threshold meeting an objective over the empirical PR curve.

    Requires both classes present in the gold labels. Eligible candidates
    exclude the synthetic above-maximum curve endpoint. Ties break toward the
    larger phi (fewer false positives); the bounded objectives optimize the
    complementary metric among the candidates meeting their bound.
    """
    positives = sum(1 for _, positive in scored if positive)
    if positives == 0 or positives == len(scored):
        raise DataError("threshold derivation needs both gold SUPPORTS and gold non-SUPPORTS claims")
    points = pr_curve(scored)
    eligible = [point for point in points[:-1] if point.phi_candidate <= 1]

    def pick(candidates: list[PRPoint], metric) -> PRPoint:
        best = max(candidates, key=lambda point: (metric(point), point.phi_candidate))
        return best

    if objective.kind is ObjectiveKind.MAX_F1:
        chosen = pick(eligible, lambda point: point.f1)
    elif objective.kind is ObjectiveKind.PRECISION_AT_LEAST:
        meeting = [point for point in eligible if point.precision >= objective.bound]
        if not meeting:
            raise DataError(f"no threshold reaches precision {objective.bound}")
        chosen = pick(meeting, lambda point: point.recall)
    else:
        meeting = [point for point in eligible if point.recall >= objective.bound]
        if not meeting:
            raise DataError(f"no threshold reaches recall {objective.bound}")
        chosen = pick(meeting, lambda point: point.precision)
    return Threshold(phi=chosen.phi_candidate, origin=ThresholdOrigin.DERIVED), points


def label_accuracy_supports(
    verdicts: Sequence[Verdict],
    gold_labels: Mapping[int, GoldLabel],
    threshold: Threshold,
) -> Fraction:
    """Percentage of scored gold-SUPPORTS claims labeled SUPPORTS at the threshold.

    The verdict list already excludes unconverted and answer-failed claims,
    so its gold-SUPPORTS subset is exactly the defined denominator. Labels
    are recomputed from the exact scores so one verdict set can be evaluated
    at any threshold.
    """
    try:
        gold_supports = [v for v in verdicts if gold_labels[v.claim_id] is GoldLabel.SUPPORTS]
    except KeyError as exc:
        raise DataError(f"verdict references claim {exc.args[0]} without a gold label") from exc
    if not gold_supports:
        raise DataError("no scored gold-SUPPORTS claims: label accuracy undefined")
    hits = sum(1 for v in gold_supports if assign_label(v.score, threshold) is Label.SUPPORTS)
    return Fraction(100 * hits, len(gold_supports))
