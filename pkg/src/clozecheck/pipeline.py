"""Stage drivers wiring the modules together over line-delimited stage files.

Stage files are the only contract between stages: ``genq`` writes questions,
``answer`` writes answers, ``classify`` writes verdicts plus the evaluation
report. Any stage can be re-run independently as long as its input stage
file exists, and identical inputs always produce byte-identical outputs.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .answerer import (
    AnswerResult,
    AnswerRun,
    OracleBackend,
    RemoteBackend,
    answer_questions,
    gold_answer_key,
    load_answer_key,
)
from .classify import Objective, PRPoint, Threshold, Verdict, derive_threshold
from .clozegen import ClozeQuestion, ConversionStats, conversion_stats, generate
from .config import PipelineConfig, validate_config
from .dataset import load_claims, read_stage, write_stage
from .errors import ConfigError, DataError
from .report import EvalReport, build_report
from .tagger import RemoteTagger, RuleTagger, Tagger
from .tokenizer import Vocab


def make_tagger(config: PipelineConfig) -> Tagger:
    if config.tagger.kind == "remote":
        return RemoteTagger(config.tagger.endpoint or "")
    gazetteer = {}
    if config.gazetteer_path is not None:
        with open(config.gazetteer_path, "r", encoding="utf-8") as handle:
            raw = json.load(handle)
        if not isinstance(raw, dict):
            raise ConfigError(f"gazetteer {config.gazetteer_path} must be a JSON object")
        gazetteer = raw
    return RuleTagger(gazetteer)


def _load_questions(config: PipelineConfig) -> list[ClozeQuestion]:
    if not config.questions_path.is_file():
        raise ConfigError(f"questions stage file not found: {config.questions_path} (run genq first)")
    return [ClozeQuestion.from_payload(r) for r in read_stage(config.questions_path, "questions")]


def make_backend(config: PipelineConfig, questions: list[ClozeQuestion]):
    backend = config.backend
    if backend.kind == "remote":
        return RemoteBackend(
            endpoint=backend.endpoint or "",
            timeout=backend.timeout,
            batch_size=backend.batch_size,
        )
    if backend.kind == "scripted":
        return OracleBackend(load_answer_key(backend.path or ""))
    if backend.path:
        return OracleBackend(load_answer_key(backend.path))
    return OracleBackend(gold_answer_key(questions))


def run_genq(config: PipelineConfig) -> ConversionStats:
    """Tag every claim, mask every entity, and write the questions stage file."""
    validate_config(config)
    claims = load_claims(config.claims_path)
    tagger = make_tagger(config)
    questions: list[ClozeQuestion] = []
    for claim in sorted(claims, key=lambda c: c.id):
        try:
            spans = tagger.tag(claim.claim)
        except DataError as exc:
            raise DataError(f"claim {claim.id}: {exc}") from exc
        questions.extend(generate(claim, spans))
    config.output_dir.mkdir(parents=True, exist_ok=True)
    write_stage(config.questions_path, "questions", [q.to_payload() for q in questions])
    return conversion_stats(claims, questions)


def run_answer(config: PipelineConfig, *, jobs: int = 1) -> AnswerRun:
    """Answer the questions stage through the configured backend."""
    validate_config(config)
    questions = _load_questions(config)
    vocab = Vocab.load(config.vocab_path)
    backend = make_backend(config, questions)
    run = answer_questions(questions, vocab, backend, jobs=jobs)
    config.output_dir.mkdir(parents=True, exist_ok=True)
    write_stage(config.answers_path, "answers", [r.to_payload() for r in run.results])
    return run


def _group_answers(answers: list[AnswerResult]) -> tuple[dict[int, list[AnswerResult]], set[int]]:
    grouped: dict[int, list[AnswerResult]] = {}
    failed: set[int] = set()
    for answer in answers:
        grouped.setdefault(answer.claim_id, []).append(answer)
        if answer.failed:
            failed.add(answer.claim_id)
    for claim_id in failed:
        grouped.pop(claim_id, None)
    return grouped, failed


def run_classify(config: PipelineConfig) -> EvalReport:
    """Score answered claims, assign labels, and write verdicts plus reports."""
    validate_config(config)
    if not config.answers_path.is_file():
        raise ConfigError(f"answers stage file not found: {config.answers_path} (run answer first)")
    claims = load_claims(config.claims_path)
    questions = _load_questions(config)
    answers = [AnswerResult.from_payload(r) for r in read_stage(config.answers_path, "answers")]
    grouped, failed_claims = _group_answers(answers)

    gold = {claim.id: claim.gold_label for claim in claims}
    for claim_id in grouped:
        if claim_id not in gold:
            raise DataError(f"answers reference unknown claim id {claim_id}")

    parsed_phi = config.parse_phi()
    pr_points: list[PRPoint] | None = None
    if isinstance(parsed_phi, Objective):
        scored = [
            (Fraction(sum(1 for a in group if a.correct), len(group)), gold[claim_id].value == "SUPPORTS")
            for claim_id, group in grouped.items()
        ]
        threshold, pr_points = derive_threshold(scored, parsed_phi)
    else:
        threshold = parsed_phi

    verdicts = [
        Verdict.build(claim_id, group, threshold) for claim_id, group in sorted(grouped.items())
    ]
    config.output_dir.mkdir(parents=True, exist_ok=True)
    write_stage(config.verdicts_path, "verdicts", [v.to_payload() for v in verdicts])

    stats = conversion_stats(claims, questions)
    report = build_report(claims, stats, verdicts, failed_claims, threshold, pr_points=pr_points)
    config.report_json_path.write_text(
        json.dumps(report.to_json_dict(), ensure_ascii=False, sort_keys=True, indent=2) + "\n",
        encoding="utf-8",
    )
    config.report_text_path.write_text(report.render_text(), encoding="utf-8")
    return report


def run_derive(config: PipelineConfig, objective: Objective | None = None) -> tuple[Threshold, list[PRPoint]]:
    """Derive a threshold from an existing verdicts stage file and gold labels."""
    validate_config(config)
    if not config.verdicts_path.is_file():
        raise ConfigError(f"verdicts stage file not found: {config.verdicts_path} (run classify first)")
    if objective is None:
        parsed = config.parse_phi()
        objective = parsed if isinstance(parsed, Objective) else Objective.parse("max_f1")
    claims = load_claims(config.claims_path)
    gold = {claim.id: claim.gold_label for claim in claims}
    verdicts = [Verdict.from_payload(r) for r in read_stage(config.verdicts_path, "verdicts")]
    scored = []
    for verdict in verdicts:
        if verdict.claim_id not in gold:
            raise DataError(f"verdict references unknown claim id {verdict.claim_id}")
        scored.append((verdict.score, gold[verdict.claim_id].value == "SUPPORTS"))
    threshold, points = derive_threshold(scored, objective)
    config.output_dir.mkdir(parents=True, exist_ok=True)
    payload = {
        "phi": threshold.display,
        "phi_num": threshold.phi.numerator,
        "phi_den": threshold.phi.denominator,
        "origin": threshold.origin.value,
        "objective": objective.kind.value + (f":{objective.bound}" if objective.bound is not None else ""),
        "pr_curve": [point.to_payload() for point in points],
    }
    (config.output_dir / "derived_threshold.json").write_text(
        json.dumps(payload, ensure_ascii=False, sort_keys=True, indent=2) + "\n", encoding="utf-8"
    )
    return threshold, points


def run_all(config: PipelineConfig, *, jobs: int = 1) -> EvalReport:
    """Run genq, answer, and classify in sequence on one config."""
    run_genq(config)
    run_answer(config, jobs=jobs)
    return run_classify(config)
