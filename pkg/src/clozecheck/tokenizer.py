"""Subword tokenization: greedy longest-match WordPiece plus a whole-word fallback.

The pipeline is uncased throughout: ``basic_tokenize`` lowercases before
subword splitting. ``fallback_tokenize`` is the whole-word segmentation used
when an entity cannot be represented as a single in-vocab piece; it keeps
the original casing and never splits below word level, so a masked slot
always lines up with exactly one answer unit.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

from .errors import DataError

# Words longer than this are not worth a subword search; they become unk_token.
MAX_WORD_CHARS = 100


def _is_punctuation(char: str) -> bool:
    cp = ord(char)
    # Treat all non-letter/number ASCII as punctuation, like the usual
    # basic tokenizers do, plus anything Unicode classes as P*.
    if (33 <= cp <= 47) or (58 <= cp <= 64) or (91 <= cp <= 96) or (123 <= cp <= 126):
        return True
    return unicodedata.category(char).startswith("P")


def _split_on_punctuation(word: str) -> list[str]:
    pieces: list[str] = []
    current: list[str] = []
    for char in word:
        if _is_punctuation(char):
            if current:
                pieces.append("".join(current))
                current = []
            pieces.append(char)
        else:
            current.append(char)
    if current:
        pieces.append("".join(current))
    return pieces


def _segment_words(text: str, lowercase: bool) -> list[str]:
    words: list[str] = []
    for chunk in text.split():
        if lowercase:
            chunk = chunk.lower()
        words.extend(_split_on_punctuation(chunk))
    return words


def basic_tokenize(text: str) -> list[str]:
    """Lowercase, split on whitespace, and split punctuation into its own words."""
    return _segment_words(text, lowercase=True)


def fallback_tokenize(text: str) -> list[str]:
    """Whole-word segmentation with casing preserved (no subword splitting)."""
    return _segment_words(text, lowercase=False)


@dataclass(frozen=True)
class Vocab:
    """An ordered token vocabulary with its reserved tokens.

    ``entries`` are unique and ``index`` is their exact inverse; the unknown
    and mask tokens must both be members.
    """

    entries: tuple[str, ...]
    unk_token: str = "[UNK]"
    mask_token: str = "[MASK]"
    continuation_prefix: str = "##"
    index: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        index: dict[str, int] = {}
        for position, token in enumerate(self.entries):
            if token in index:
                raise DataError(f"duplicate vocab token {token!r} at positions {index[token]} and {position}")
            index[token] = position
        for reserved in (self.unk_token, self.mask_token):
            if reserved not in index:
                raise DataError(f"reserved token {reserved!r} missing from vocabulary")
        object.__setattr__(self, "index", index)

    def __contains__(self, token: str) -> bool:
        return token in self.index

    def __len__(self) -> int:
        return len(self.entries)

    @classmethod
    def from_tokens(cls, tokens: Iterable[str], **kwargs) -> "Vocab":
        return cls(entries=tuple(tokens), **kwargs)

    @classmethod
    def load(cls, path: str | Path, **kwargs) -> "Vocab":
        """Load a vocabulary file: one token per line, line number = index."""
        with open(path, "r", encoding="utf-8") as handle:
            entries = [line.rstrip("\n") for line in handle]
        # A trailing newline at end of file does not define an empty token.
        if entries and entries[-1] == "":
            entries.pop()
        return cls(entries=tuple(entries), **kwargs)


def wordpiece(word: str, vocab: Vocab) -> list[str]:
    """Segment one basic-tokenized word by greedy longest-prefix matching.

    Non-initial pieces carry the continuation prefix. If at any point no
    prefix of the remaining suffix is in the vocabulary, the whole word
    collapses to ``unk_token`` (no backtracking), as does any word longer
    than MAX_WORD_CHARS.
    """
    if not word or len(word) > MAX_WORD_CHARS:
        return [vocab.unk_token]
    pieces: list[str] = []
    start = 0
    while start < len(word):
        end = len(word)
        chosen = None
        while start < end:
            candidate = word[start:end]
            if start > 0:
                candidate = vocab.continuation_prefix + candidate
            if candidate in vocab:
                chosen = candidate
                break
            end -= 1
        if chosen is None:
            return [vocab.unk_token]
        pieces.append(chosen)
        start = end
    return pieces


def is_single_piece(entity_text: str, vocab: Vocab) -> bool:
    """True iff the text is one basic word that WordPiece keeps whole and in-vocab."""
    words = basic_tokenize(entity_text)
    if len(words) != 1:
        return False
    pieces = wordpiece(words[0], vocab)
    return len(pieces) == 1 and pieces[0] != vocab.unk_token


@dataclass(frozen=True)
class TokenSequence:
    """WordPiece tokens for a text plus per-word piece boundaries.

    ``word_boundaries[i]`` is the half-open token range holding the pieces of
    the i-th basic-tokenized word.
    """

    tokens: tuple[str, ...]
    word_boundaries: tuple[tuple[int, int], ...]


def tokenize(text: str, vocab: Vocab) -> TokenSequence:
    """Basic-tokenize then WordPiece every word, tracking word boundaries."""
    tokens: list[str] = []
    boundaries: list[tuple[int, int]] = []
    for word in basic_tokenize(text):
        start = len(tokens)
        tokens.extend(wordpiece(word, vocab))
        boundaries.append((start, len(tokens)))
    return TokenSequence(tokens=tuple(tokens), word_boundaries=tuple(boundaries))
