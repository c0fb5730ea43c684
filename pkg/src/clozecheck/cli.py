"""Command-line front end: genq, answer, classify, derive-threshold, run.

Every command takes ``--config <path>`` plus a handful of overrides. Exit
codes are scriptable: 0 success, 1 config/validation error, 2 data error,
3 transport failure.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from .classify import Objective
from .config import BackendConfig, PipelineConfig, load_config
from .errors import ConfigError, DataError, TransportError
from .pipeline import run_answer, run_classify, run_derive, run_genq
from .report import format_pct

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_DATA = 2
EXIT_TRANSPORT = 3


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors; bad invocations are config errors here.
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _parse_backend_override(text: str) -> BackendConfig:
    kind, _, arg = text.partition("=")
    if kind == "oracle":
        return BackendConfig(kind="oracle", path=arg or None)
    if kind == "scripted":
        if not arg:
            raise ConfigError("--backend scripted=<answer key path>")
        return BackendConfig(kind="scripted", path=arg)
    if kind == "remote":
        if not arg:
            raise ConfigError("--backend remote=<endpoint url>")
        return BackendConfig(kind="remote", endpoint=arg)
    raise ConfigError(f"unknown backend override {text!r}")


def _apply_overrides(config: PipelineConfig, args: argparse.Namespace) -> PipelineConfig:
    if getattr(args, "phi", None):
        config = replace(config, phi=args.phi)
    if getattr(args, "vocab", None):
        config = replace(config, vocab_path=Path(args.vocab))
    if getattr(args, "backend", None):
        config = replace(config, backend=_parse_backend_override(args.backend))
    return config


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="clozecheck", description=__doc__)
    commands = parser.add_subparsers(dest="command", required=True)

    def add_command(name: str, help_text: str) -> argparse.ArgumentParser:
        sub = commands.add_parser(name, help=help_text)
        sub.add_argument("--config", required=True, help="pipeline config JSON")
        sub.add_argument("--phi", help="override the classification threshold")
        sub.add_argument("--vocab", help="override the vocabulary file path")
        sub.add_argument("--backend", help="override the answer backend (oracle | scripted=PATH | remote=URL)")
        sub.add_argument("--jobs", type=int, default=1, help="bounded stage-internal parallelism")
        return sub

    add_command("genq", "generate masked-entity questions from claims")
    add_command("answer", "answer the generated questions through the backend")
    add_command("classify", "score answers, assign labels, and write the report")
    derive = add_command("derive-threshold", "derive a threshold from existing verdicts")
    derive.add_argument("--objective", default=None, help="max_f1 | precision_at_least:P | recall_at_least:R")
    add_command("run", "run genq, answer, and classify in sequence")
    return parser


def _run_answer_command(config: PipelineConfig, jobs: int) -> None:
    run = run_answer(config, jobs=jobs)
    answered = sum(1 for result in run.results if not result.failed)
    # Partial failures are reported and carried as answer_failed claims; a
    # backend that answered nothing at all is a transport-level failure.
    if run.results and answered == 0:
        raise TransportError(f"answer backend produced no results: all {len(run.results)} queries failed")
    print(f"answered: {answered} | failed claims: {len(run.failed_claims)}")


def _print_stats(stats) -> None:
    print(
        "claims: {total} | converted: {converted} | conversion accuracy: {accuracy} | "
        "questions: {questions} | median per converted claim: {median}".format(
            total=stats.total_claims,
            converted=stats.converted_claims,
            accuracy=format_pct(stats.conversion_accuracy),
            questions=stats.total_questions,
            median=stats.median_questions_per_claim if stats.median_questions_per_claim is not None else "-",
        )
    )


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = _apply_overrides(load_config(args.config), args)
        if args.command == "genq":
            _print_stats(run_genq(config))
        elif args.command == "answer":
            _run_answer_command(config, args.jobs)
        elif args.command == "classify":
            report = run_classify(config)
            print(report.render_text(), end="")
        elif args.command == "derive-threshold":
            objective = Objective.parse(args.objective) if args.objective else None
            threshold, points = run_derive(config, objective)
            print(f"derived phi = {threshold.display} ({len(points)} PR points)")
        elif args.command == "run":
            _print_stats(run_genq(config))
            _run_answer_command(config, args.jobs)
            report = run_classify(config)
            print(report.render_text(), end="")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except TransportError as exc:
        print(f"transport error: {exc}", file=sys.stderr)
        return EXIT_TRANSPORT
    return EXIT_OK


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
