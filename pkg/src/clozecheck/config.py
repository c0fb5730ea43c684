"""Declarative pipeline configuration loaded from a JSON document.

The config mirrors the CLI's knobs exactly: input paths, tagger choice,
answer backend choice, the classification threshold (a literal value or a
derivation objective), and the output directory holding the stage files.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .classify import Objective, Threshold
from .errors import ConfigError


@dataclass(frozen=True)
class TaggerConfig:
    kind: str  # "rule" | "remote"
    endpoint: str | None = None


@dataclass(frozen=True)
class BackendConfig:
    kind: str  # "oracle" | "scripted" | "remote"
    path: str | None = None
    endpoint: str | None = None
    batch_size: int = 16
    timeout: float = 10.0


@dataclass(frozen=True)
class PipelineConfig:
    claims_path: Path
    vocab_path: Path
    output_dir: Path
    tagger: TaggerConfig = field(default_factory=lambda: TaggerConfig(kind="rule"))
    backend: BackendConfig = field(default_factory=lambda: BackendConfig(kind="oracle"))
    phi: str = "0.76"
    gazetteer_path: Path | None = None

    @property
    def questions_path(self) -> Path:
        return self.output_dir / "questions.jsonl"

    @property
    def answers_path(self) -> Path:
        return self.output_dir / "answers.jsonl"

    @property
    def verdicts_path(self) -> Path:
        return self.output_dir / "verdicts.jsonl"

    @property
    def report_json_path(self) -> Path:
        return self.output_dir / "report.json"

    @property
    def report_text_path(self) -> Path:
        return self.output_dir / "report.txt"

    def parse_phi(self) -> Threshold | Objective:
        """A literal phi gives a Threshold; "derive(<objective>)" gives an Objective."""
        text = self.phi.strip()
        if text.startswith("derive(") and text.endswith(")"):
            return Objective.parse(text[len("derive(") : -1])
        return Threshold.preset(text)


def _parse_tagger(raw: Any) -> TaggerConfig:
    if raw is None:
        return TaggerConfig(kind="rule")
    if isinstance(raw, str):
        if raw != "rule":
            raise ConfigError(f"tagger {raw!r} needs an endpoint; use {{\"remote\": {{\"endpoint\": ...}}}}")
        return TaggerConfig(kind="rule")
    if isinstance(raw, dict) and len(raw) == 1:
        kind, options = next(iter(raw.items()))
        if kind == "rule":
            return TaggerConfig(kind="rule")
        if kind == "remote":
            endpoint = (options or {}).get("endpoint")
            if not endpoint:
                raise ConfigError("remote tagger requires an endpoint")
            return TaggerConfig(kind="remote", endpoint=endpoint)
    raise ConfigError(f"unrecognized tagger config {raw!r}")


def _parse_backend(raw: Any, resolve) -> BackendConfig:
    if raw is None:
        return BackendConfig(kind="oracle")
    if isinstance(raw, str):
        if raw == "oracle":
            return BackendConfig(kind="oracle")
        raise ConfigError(f"backend {raw!r} needs options; use an object form")
    if isinstance(raw, dict) and len(raw) == 1:
        kind, options = next(iter(raw.items()))
        options = options or {}
        if kind == "oracle":
            path = options.get("path")
            return BackendConfig(kind="oracle", path=str(resolve(path)) if path else None)
        if kind == "scripted":
            path = options.get("path")
            if not path:
                raise ConfigError("scripted backend requires a path to an answer key")
            return BackendConfig(kind="scripted", path=str(resolve(path)))
        if kind == "remote":
            endpoint = options.get("endpoint")
            if not endpoint:
                raise ConfigError("remote backend requires an endpoint")
            return BackendConfig(
                kind="remote",
                endpoint=endpoint,
                batch_size=int(options.get("batch_size", 16)),
                timeout=float(options.get("timeout", 10.0)),
            )
    raise ConfigError(f"unrecognized backend config {raw!r}")


def load_config(path: str | Path) -> PipelineConfig:
    """Load and structurally validate a pipeline config document."""
    try:
        with open(path, "r", encoding="utf-8") as handle:
            raw = json.load(handle)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError(f"config {path} must be a JSON object")
    known = {"claims_path", "vocab_path", "gazetteer_path", "tagger", "backend", "phi", "output_dir"}
    unknown = set(raw) - known
    if unknown:
        raise ConfigError(f"config {path} has unknown fields: {sorted(unknown)}")
    for required in ("claims_path", "vocab_path", "output_dir"):
        if required not in raw:
            raise ConfigError(f"config {path} missing required field {required!r}")
    base = Path(path).parent

    def resolve(p: str) -> Path:
        return Path(p) if Path(p).is_absolute() else base / p

    return PipelineConfig(
        claims_path=resolve(raw["claims_path"]),
        vocab_path=resolve(raw["vocab_path"]),
        output_dir=resolve(raw["output_dir"]),
        tagger=_parse_tagger(raw.get("tagger")),
        backend=_parse_backend(raw.get("backend"), resolve),
        phi=str(raw.get("phi", "0.76")),
        gazetteer_path=resolve(raw["gazetteer_path"]) if raw.get("gazetteer_path") else None,
    )


def validate_config(config: PipelineConfig) -> None:
    """Check that every referenced input path exists and phi parses."""
    if not config.claims_path.is_file():
        raise ConfigError(f"claims file not found: {config.claims_path}")
    if not config.vocab_path.is_file():
        raise ConfigError(f"vocab file not found: {config.vocab_path}")
    if config.gazetteer_path is not None and not config.gazetteer_path.is_file():
        raise ConfigError(f"gazetteer file not found: {config.gazetteer_path}")
    if config.backend.kind == "scripted" and not Path(config.backend.path or "").is_file():
        raise ConfigError(f"scripted answer key not found: {config.backend.path}")
    if config.backend.kind == "oracle" and config.backend.path and not Path(config.backend.path).is_file():
        raise ConfigError(f"oracle answer key not found: {config.backend.path}")
    config.parse_phi()
