"""Evaluation report: conversion stats, outcome counts, and label accuracy.

The text rendering mirrors the two summary tables the pipeline is judged by:
a question-generation row (total / converted / accuracy / total questions /
median) and a label-accuracy row per threshold. Percentages are displayed
truncated to two decimals — matching how the reference tables print — while
the machine-readable report keeps the exact numerator/denominator alongside
the float value.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Mapping, Sequence

from .classify import PRPoint, Threshold, Verdict, label_accuracy_supports
from .clozegen import ConversionStats
from .dataset import ClaimRecord, GoldLabel
from .errors import DataError


def format_pct(value: Fraction | None, digits: int = 2) -> str:
    """Truncate (not round) an exact percentage for table display."""
    if value is None:
        return "-"
    scale = 10**digits
    whole, part = divmod(int(value * scale), scale)
    return f"{whole}.{part:0{digits}d}"


@dataclass(frozen=True)
class EvalReport:
    conversion: ConversionStats
    threshold: Threshold
    counts: dict[str, int]
    label_accuracy: dict[str, Fraction | None]
    denominator: int
    unverifiable_claims: int
    pr_points: tuple[PRPoint, ...] | None = None

    def to_json_dict(self) -> dict[str, Any]:
        accuracy = self.conversion.conversion_accuracy
        payload: dict[str, Any] = {
            "question_generation": {
                "total_claims": self.conversion.total_claims,
                "converted_claims": self.conversion.converted_claims,
                "conversion_accuracy": float(accuracy) if accuracy is not None else None,
                "conversion_accuracy_display": format_pct(accuracy),
                "total_questions": self.conversion.total_questions,
                "median_questions_per_claim": self.conversion.median_questions_per_claim,
                "median_questions_all_claims": self.conversion.median_questions_all_claims,
            },
            "classification": {
                "phi": self.threshold.display,
                "phi_num": self.threshold.phi.numerator,
                "phi_den": self.threshold.phi.denominator,
                "phi_origin": self.threshold.origin.value,
                "counts": dict(self.counts),
                "label_accuracy_denominator": self.denominator,
                "label_accuracy_supports": {
                    phi: (float(value) if value is not None else None)
                    for phi, value in self.label_accuracy.items()
                },
                "label_accuracy_supports_display": {
                    phi: format_pct(value) for phi, value in self.label_accuracy.items()
                },
            },
            "gold_buckets": {"unverifiable_claims": self.unverifiable_claims},
        }
        if self.pr_points is not None:
            payload["pr_curve"] = [point.to_payload() for point in self.pr_points]
        return payload

    def render_text(self) -> str:
        conv = self.conversion
        lines = [
            "question generation",
            "  total claims | claims converted to questions | conversion accuracy"
            " | total questions | questions per claim (median)",
            "  {total:>12} | {converted:>29} | {accuracy:>19} | {questions:>15} | {median:>28}".format(
                total=conv.total_claims,
                converted=conv.converted_claims,
                accuracy=format_pct(conv.conversion_accuracy),
                questions=conv.total_questions,
                median=conv.median_questions_per_claim if conv.median_questions_per_claim is not None else "-",
            ),
            "  (median over all claims, zeros included: {})".format(
                conv.median_questions_all_claims if conv.median_questions_all_claims is not None else "-"
            ),
            "",
            "label accuracy (SUPPORTS), denominator = scored gold-SUPPORTS claims ({})".format(self.denominator),
        ]
        for phi, value in self.label_accuracy.items():
            lines.append(f"  phi = {phi}: {format_pct(value)}")
        lines.extend(
            [
                "",
                f"configured phi = {self.threshold.display} ({self.threshold.origin.value})",
                "",
                "claim outcomes",
                "  SUPPORTS: {supports} | MANUAL_REVIEW: {manual_review} | unconverted: {unconverted}"
                " | answer_failed: {answer_failed} | total: {total}".format(**self.counts),
                f"  gold-unverifiable claims (counted above, reported separately): {self.unverifiable_claims}",
            ]
        )
        return "\n".join(lines) + "\n"


def build_report(
    claims: Sequence[ClaimRecord],
    stats: ConversionStats,
    verdicts: Sequence[Verdict],
    failed_claims: set[int],
    threshold: Threshold,
    *,
    extra_phis: Sequence[str] = ("0.76", "0.67"),
    pr_points: Sequence[PRPoint] | None = None,
) -> EvalReport:
    """Assemble the evaluation report for one classified run.

    Outcome counts partition the claim set: labeled claims, unconverted
    claims (no questions), and answer-failed claims; they must sum to the
    total. Label accuracy is evaluated at the configured threshold plus the
    two shipped presets when gold SUPPORTS claims were scored at all.
    """
    gold_labels = {claim.id: claim.gold_label for claim in claims}
    scored_ids = {verdict.claim_id for verdict in verdicts}
    if scored_ids & failed_claims:
        raise DataError("a claim cannot be both scored and answer_failed")
    counts = {
        "supports": sum(1 for v in verdicts if v.label.value == "SUPPORTS"),
        "manual_review": sum(1 for v in verdicts if v.label.value == "MANUAL_REVIEW"),
        "answer_failed": len(failed_claims),
        "unconverted": len(claims) - len(scored_ids) - len(failed_claims),
        "total": len(claims),
    }
    phis: list[str] = [threshold.display]
    for preset in extra_phis:
        if preset not in phis:
            phis.append(preset)
    has_gold_supports = any(
        gold_labels.get(v.claim_id) is GoldLabel.SUPPORTS for v in verdicts
    )
    accuracy: dict[str, Fraction | None] = {}
    for phi_text in phis:
        if has_gold_supports:
            phi = threshold if phi_text == threshold.display else Threshold.preset(phi_text)
            accuracy[phi_text] = label_accuracy_supports(verdicts, gold_labels, phi)
        else:
            accuracy[phi_text] = None
    denominator = sum(1 for v in verdicts if gold_labels.get(v.claim_id) is GoldLabel.SUPPORTS)
    return EvalReport(
        conversion=stats,
        threshold=threshold,
        counts=counts,
        label_accuracy=accuracy,
        denominator=denominator,
        unverifiable_claims=sum(1 for claim in claims if not claim.verifiable),
        pr_points=tuple(pr_points) if pr_points is not None else None,
    )
