"""Claim ingestion and line-delimited stage files.

Every inter-stage artifact is a UTF-8 file of one JSON record per line so
each pipeline stage is independently runnable, diffable, and resumable.
Stage files start with a header record ``{"stage": <name>, "version": 1}``;
payload lines carry ``claim_id`` plus the stage-specific fields and are
sorted by ``claim_id`` ascending.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Iterable, Mapping

from .errors import DataError

STAGE_FILE_VERSION = 1

STAGES = ("questions", "answers", "verdicts")


class GoldLabel(enum.Enum):
    SUPPORTS = "SUPPORTS"
    REFUTES = "REFUTES"
    NOT_ENOUGH_INFO = "NOT ENOUGH INFO"

    @classmethod
    def parse(cls, raw: str) -> "GoldLabel":
        # Fail loudly on anything outside the three known strings.
        for member in cls:
            if raw == member.value:
                return member
        raise DataError(f"unknown gold label {raw!r}")


@dataclass(frozen=True)
class ClaimRecord:
    """One claim as ingested: text is kept byte-identical to the input."""

    id: int
    claim: str
    gold_label: GoldLabel
    verifiable: bool


def _parse_verifiable(raw: Any) -> bool:
    if isinstance(raw, bool):
        return raw
    if isinstance(raw, str):
        flag = raw.strip().upper()
        if flag == "VERIFIABLE":
            return True
        if flag == "NOT VERIFIABLE":
            return False
    raise DataError(f"unrecognized verifiable flag {raw!r}")


def load_claims(path: str | Path) -> list[ClaimRecord]:
    """Read a claims file (one JSON record per line) in file order.

    Claim text is taken as-is: no lowercasing, no punctuation mapping,
    no whitespace normalization. Extra fields on a record are ignored.

    Raises:
        DataError: on a malformed line (named by line number), a missing
            field, an empty claim, an unknown label, or a duplicate id.
    """
    records: list[ClaimRecord] = []
    seen_ids: set[int] = set()
    with open(path, "r", encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                raw = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DataError(f"line {lineno}: not valid JSON ({exc.msg})") from exc
            if not isinstance(raw, dict):
                raise DataError(f"line {lineno}: record is not an object")
            try:
                claim_id = raw["id"]
                claim = raw["claim"]
                label = raw["label"]
                verifiable = raw["verifiable"]
            except KeyError as exc:
                raise DataError(f"line {lineno}: missing field {exc.args[0]!r}") from exc
            if not isinstance(claim_id, int) or isinstance(claim_id, bool):
                raise DataError(f"line {lineno}: id must be an integer")
            if claim_id in seen_ids:
                raise DataError(f"duplicate claim id {claim_id}")
            seen_ids.add(claim_id)
            if not isinstance(claim, str) or not claim.strip():
                raise DataError(f"line {lineno}: claim text is empty")
            if not isinstance(label, str):
                raise DataError(f"line {lineno}: label must be a string")
            try:
                gold = GoldLabel.parse(label)
                flag = _parse_verifiable(verifiable)
            except DataError as exc:
                raise DataError(f"line {lineno}: {exc}") from exc
            records.append(ClaimRecord(id=claim_id, claim=claim, gold_label=gold, verifiable=flag))
    return records


def dumps_record(record: Mapping[str, Any]) -> str:
    """Serialize one record deterministically (sorted keys, compact, UTF-8)."""
    return json.dumps(record, ensure_ascii=False, sort_keys=True, separators=(",", ":"))


def write_stage(path: str | Path, stage: str, records: Iterable[Mapping[str, Any]]) -> int:
    """Write a stage file and return the number of payload records written.

    Records must each carry ``claim_id`` and arrive sorted by it (ascending,
    duplicates allowed for multi-question stages).
    """
    if stage not in STAGES:
        raise DataError(f"unknown stage {stage!r}")
    count = 0
    last_id: int | None = None
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(dumps_record({"stage": stage, "version": STAGE_FILE_VERSION}) + "\n")
        for record in records:
            claim_id = record.get("claim_id")
            if not isinstance(claim_id, int) or isinstance(claim_id, bool):
                raise DataError(f"stage {stage}: record without integer claim_id: {record!r}")
            if last_id is not None and claim_id < last_id:
                raise DataError(f"stage {stage}: records not sorted by claim_id (saw {claim_id} after {last_id})")
            last_id = claim_id
            handle.write(dumps_record(record) + "\n")
            count += 1
    return count


def read_stage(path: str | Path, stage: str) -> list[dict[str, Any]]:
    """Read a stage file back, checking the header against the requested stage."""
    if stage not in STAGES:
        raise DataError(f"unknown stage {stage!r}")
    with open(path, "r", encoding="utf-8") as handle:
        header_line = handle.readline()
        if not header_line.strip():
            raise DataError(f"{path}: missing stage header")
        try:
            header = json.loads(header_line)
        except json.JSONDecodeError as exc:
            raise DataError(f"{path}: malformed stage header") from exc
        if not isinstance(header, dict) or "stage" not in header:
            raise DataError(f"{path}: malformed stage header")
        if header["stage"] != stage:
            raise DataError(f"{path}: stage mismatch: file holds {header['stage']!r}, requested {stage!r}")
        if header.get("version") != STAGE_FILE_VERSION:
            raise DataError(f"{path}: unsupported stage file version {header.get('version')!r}")
        records: list[dict[str, Any]] = []
        for lineno, line in enumerate(handle, start=2):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DataError(f"{path} line {lineno}: not valid JSON") from exc
            if not isinstance(record, dict):
                raise DataError(f"{path} line {lineno}: record is not an object")
            records.append(record)
    return records
