"""Named-entity span tagging behind a small pluggable interface.

Two implementations ship: RuleTagger, a deterministic heuristic tagger good
enough for desk-scale fixtures (gazetteer lookups, capitalized-token runs,
digit patterns), and RemoteTagger, a client for an external NER service.
Both return spans that index into the claim exactly as written; the claim
text itself is never altered.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from typing import Mapping, Protocol, Sequence

from . import remote
from .errors import ConfigError, DataError


class EntityType(enum.Enum):
    PERSON = "PERSON"
    LOCATION = "LOCATION"
    ORGANIZATION = "ORGANIZATION"
    DATE = "DATE"
    NUMBER = "NUMBER"
    MISC = "MISC"

    @classmethod
    def coerce(cls, raw: "EntityType | str") -> "EntityType":
        """Map a type name into the closed six-value set; outsiders become MISC."""
        if isinstance(raw, cls):
            return raw
        try:
            return cls[str(raw).strip().upper()]
        except KeyError:
            return cls.MISC


@dataclass(frozen=True)
class EntitySpan:
    """One entity occurrence: ``claim[start:end] == text``, casing included."""

    text: str
    etype: EntityType
    start: int
    end: int


def validate_spans(claim: str, spans: Sequence[EntitySpan], claim_id: int | None = None) -> None:
    """Check span invariants against the claim; raise DataError on violation.

    Spans must be in-bounds, match the claim text exactly, and be
    non-overlapping in ascending start order.
    """
    where = f"claim {claim_id}" if claim_id is not None else "claim"
    previous_end = 0
    for span in spans:
        if not (0 <= span.start < span.end <= len(claim)):
            raise DataError(f"{where}: span ({span.start},{span.end}) out of bounds for length {len(claim)}")
        if claim[span.start : span.end] != span.text:
            raise DataError(
                f"{where}: span text {span.text!r} does not match claim slice "
                f"{claim[span.start:span.end]!r} at ({span.start},{span.end})"
            )
        if span.start < previous_end:
            raise DataError(f"{where}: spans overlap or are unsorted at offset {span.start}")
        previous_end = span.end


class Tagger(Protocol):
    def tag(self, claim: str) -> list[EntitySpan]: ...


_TOKEN_RE = re.compile(r"\w+(?:['’\-]\w+)*")
_NUMBER_RE = re.compile(r"\d[\d,./:\-]*\d|\d")
_YEAR_RE = re.compile(r"[12]\d{3}")

# Sentence-initial capitals are usually just orthography ("The", "He"); this
# closed list suppresses them. Anything else capitalized at sentence start is
# kept — claims routinely open with the entity they are about.
_SENTENCE_INITIAL_SKIP = frozenset(
    """
    the a an this that these those it its he his she her they their them we
    our you your i my who whom whose which what when where why how there here
    in on at by for of to with from as into over under after before during
    between through about against is are was were be been being am do does
    did have has had having can could will would shall should may might must
    and or but nor not no so if then because since while although however
    also both each every few many most other some such only even still yet
    once all any
    """.split()
)


def _sentence_initial(text: str, token_start: int) -> bool:
    cursor = token_start - 1
    while cursor >= 0 and (text[cursor].isspace() or text[cursor] in "\"'“‘()[]"):
        cursor -= 1
    return cursor < 0 or text[cursor] in ".!?"


class RuleTagger:
    """Heuristic tagger: gazetteer matches, capitalized runs, digit patterns.

    Overlapping candidates are resolved leftmost-longest. At equal position
    and length a gazetteer hit outranks a digit pattern, which outranks a
    bare capitalized run (the gazetteer carries a real type, runs are MISC).
    """

    def __init__(self, gazetteer: Mapping[str, EntityType | str] | None = None) -> None:
        entries: dict[str, EntityType] = {}
        for name, etype in (gazetteer or {}).items():
            if not name:
                raise ConfigError("gazetteer keys must be non-empty strings")
            entries[name] = EntityType.coerce(etype)
        self._gazetteer = entries

    def tag(self, claim: str) -> list[EntitySpan]:
        if not claim:
            raise ValueError("claim must be non-empty")
        # (start, -length, priority) ordering gives leftmost-longest overall.
        candidates: list[tuple[int, int, int, EntitySpan]] = []
        for span in self._gazetteer_spans(claim):
            candidates.append((span.start, -(span.end - span.start), 0, span))
        for span in self._number_spans(claim):
            candidates.append((span.start, -(span.end - span.start), 1, span))
        for span in self._capitalized_run_spans(claim):
            candidates.append((span.start, -(span.end - span.start), 2, span))
        candidates.sort(key=lambda item: item[:3])
        chosen: list[EntitySpan] = []
        cursor = 0
        for _, _, _, span in candidates:
            if span.start >= cursor:
                chosen.append(span)
                cursor = span.end
        validate_spans(claim, chosen)
        return chosen

    def _gazetteer_spans(self, claim: str) -> list[EntitySpan]:
        spans = []
        for name, etype in self._gazetteer.items():
            for found in re.finditer(re.escape(name), claim):
                start, end = found.start(), found.end()
                if start > 0 and (claim[start - 1].isalnum() or claim[start - 1] == "_"):
                    continue
                if end < len(claim) and (claim[end].isalnum() or claim[end] == "_"):
                    continue
                spans.append(EntitySpan(text=name, etype=etype, start=start, end=end))
        return spans

    def _number_spans(self, claim: str) -> list[EntitySpan]:
        spans = []
        for found in _NUMBER_RE.finditer(claim):
            start, end = found.start(), found.end()
            if start > 0 and claim[start - 1].isalnum():
                continue
            if end < len(claim) and claim[end].isalnum():
                continue
            text = found.group()
            etype = EntityType.DATE if _YEAR_RE.fullmatch(text) else EntityType.NUMBER
            spans.append(EntitySpan(text=text, etype=etype, start=start, end=end))
        return spans

    def _capitalized_run_spans(self, claim: str) -> list[EntitySpan]:
        tokens = [(match.group(), match.start(), match.end()) for match in _TOKEN_RE.finditer(claim)]
        runs: list[list[tuple[str, int, int]]] = []
        current: list[tuple[str, int, int]] = []
        for token in tokens:
            text, start, _ = token
            capitalized = text[:1].isupper()
            joins_run = bool(current) and claim[current[-1][2] : start].isspace() and capitalized
            if joins_run:
                current.append(token)
            else:
                if current:
                    runs.append(current)
                current = [token] if capitalized else []
        if current:
            runs.append(current)

        spans = []
        for run in runs:
            head, head_start, _ = run[0]
            if (
                _sentence_initial(claim, head_start)
                and head.lower() in _SENTENCE_INITIAL_SKIP
                and head not in self._gazetteer
            ):
                run = run[1:]
                if not run:
                    continue
            start = run[0][1]
            end = run[-1][2]
            spans.append(EntitySpan(text=claim[start:end], etype=EntityType.MISC, start=start, end=end))
        return spans


class RemoteTagger:
    """Client for an external NER service speaking the one-claim-per-request protocol.

    Request: ``{"text": <claim>}``. Response: ``{"entities": [{"text", "type",
    "start", "end"}]}`` with character offsets into the request text. Spans
    are validated against the claim before being returned.
    """

    def __init__(
        self,
        endpoint: str,
        *,
        timeout: float = remote.DEFAULT_TIMEOUT,
        retries: int = remote.DEFAULT_RETRIES,
        backoff: float = remote.DEFAULT_BACKOFF,
    ) -> None:
        self.endpoint = endpoint
        self.timeout = timeout
        self.retries = retries
        self.backoff = backoff

    def tag(self, claim: str) -> list[EntitySpan]:
        if not claim:
            raise ValueError("claim must be non-empty")
        body = remote.post_json(
            self.endpoint,
            {"text": claim},
            timeout=self.timeout,
            retries=self.retries,
            backoff=self.backoff,
        )
        entities = body.get("entities")
        if not isinstance(entities, list):
            raise DataError(f"tagger response missing 'entities' list: {body!r}")
        spans = []
        for entry in entities:
            if not isinstance(entry, dict):
                raise DataError(f"tagger entity is not an object: {entry!r}")
            try:
                text = entry["text"]
                etype = entry["type"]
                start = entry["start"]
                end = entry["end"]
            except KeyError as exc:
                raise DataError(f"tagger entity missing field {exc.args[0]!r}") from exc
            if not isinstance(start, int) or not isinstance(end, int) or not isinstance(text, str):
                raise DataError(f"tagger entity has wrong field types: {entry!r}")
            spans.append(EntitySpan(text=text, etype=EntityType.coerce(etype), start=start, end=end))
        spans.sort(key=lambda span: (span.start, span.end))
        validate_spans(claim, spans)
        return spans
