"""WordPiece segmentation, the whole-word fallback, and vocabulary handling."""

from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from clozecheck import DataError, Vocab, basic_tokenize, fallback_tokenize, is_single_piece, tokenize, wordpiece


def segment_oracle(word: str, vocab_tokens: set[str], prefix: str = "##", unk: str = "[UNK]") -> list[str]:
    """Independent leftmost-longest segmenter: enumerate every in-vocab piece
    at the cursor and take the longest, with no backtracking."""
    pieces: list[str] = []
    position = 0
    while position < len(word):
        matches = [
            (end, (prefix if position else "") + word[position:end])
            for end in range(position + 1, len(word) + 1)
            if ((prefix if position else "") + word[position:end]) in vocab_tokens
        ]
        if not matches:
            return [unk]
        end, piece = max(matches)
        pieces.append(piece)
        position = end
    return pieces


class TestBasicTokenize:
    def test_lowercases_and_splits_punctuation(self):
        assert basic_tokenize("Berlin is great.") == ["berlin", "is", "great", "."]

    def test_empty(self):
        assert basic_tokenize("") == []

    def test_title_phrase(self):
        words = basic_tokenize("A View to a Kill")
        assert words == ["a", "view", "to", "a", "kill"]
        # Rejoining (case/space-insensitively) loses nothing.
        assert "".join(words) == "A View to a Kill".replace(" ", "").lower()

    def test_interior_punctuation_splits(self):
        assert basic_tokenize("don't stop") == ["don", "'", "t", "stop"]


class TestFallbackTokenize:
    def test_preserves_case_whole_words(self):
        assert fallback_tokenize("Taran appeared in Baahubali.") == ["Taran", "appeared", "in", "Baahubali", "."]

    def test_empty(self):
        assert fallback_tokenize("") == []


class TestWordPiece:
    def test_splits_out_of_vocab_name(self, vocab):
        # "taran" is absent but "tara" + "##n" are present.
        assert wordpiece("taran", vocab) == ["tara", "##n"]

    def test_whole_word_hit(self, vocab):
        assert wordpiece("capital", vocab) == ["capital"]

    def test_no_match_becomes_unk(self, vocab):
        assert wordpiece("qzx", vocab) == ["[UNK]"]

    def test_overlong_word_becomes_unk(self, vocab):
        assert wordpiece("a" * 101, vocab) == ["[UNK]"]

    def test_no_backtracking(self):
        # Greedy takes "ab" first and then dies; it never revisits "a"+"##bc".
        vocab = Vocab.from_tokens(["[UNK]", "[MASK]", "ab", "a", "##bc"])
        assert wordpiece("abc", vocab) == ["[UNK]"]

    def test_determinism(self, vocab):
        assert wordpiece("taran", vocab) == wordpiece("taran", vocab)

    @given(data=st.data())
    @settings(max_examples=300, deadline=None)
    def test_matches_independent_oracle(self, data):
        alphabet = "abcd"
        pieces = st.text(alphabet, min_size=1, max_size=4)
        tokens = data.draw(st.sets(st.one_of(pieces, pieces.map(lambda p: "##" + p)), max_size=50))
        vocab = Vocab.from_tokens(["[UNK]", "[MASK]", *sorted(tokens)])
        word = data.draw(st.text(alphabet, min_size=1, max_size=8))
        assert wordpiece(word, vocab) == segment_oracle(word, set(vocab.entries))

    @given(data=st.data())
    @settings(max_examples=300, deadline=None)
    def test_reconstruction(self, data):
        alphabet = "abcd"
        pieces = st.text(alphabet, min_size=1, max_size=4)
        tokens = data.draw(st.sets(st.one_of(pieces, pieces.map(lambda p: "##" + p)), max_size=50))
        vocab = Vocab.from_tokens(["[UNK]", "[MASK]", *sorted(tokens)])
        word = data.draw(st.text(alphabet, min_size=1, max_size=8))
        result = wordpiece(word, vocab)
        if result != ["[UNK]"]:
            assert "".join(piece.removeprefix("##") for piece in result) == word


class TestIsSinglePiece:
    def test_in_vocab_entity(self, vocab):
        assert is_single_piece("Berlin", vocab) is True

    def test_multi_piece_entity(self, vocab):
        assert is_single_piece("Taran", vocab) is False

    def test_unknown_entity(self, vocab):
        assert is_single_piece("Nikolaj", vocab) is False

    def test_multi_word_entity(self, vocab):
        assert is_single_piece("A View", vocab) is False


class TestVocab:
    def test_load_line_number_is_index(self, vocab_file):
        vocab = Vocab.load(vocab_file)
        assert vocab.index["[PAD]"] == 0
        assert vocab.index["[MASK]"] == 4
        assert len(vocab) == len(vocab.entries)

    def test_trailing_newline_defines_no_token(self, tmp_path):
        path = tmp_path / "vocab.txt"
        path.write_text("[UNK]\n[MASK]\nword\n", encoding="utf-8")
        assert Vocab.load(path).entries == ("[UNK]", "[MASK]", "word")

    def test_duplicate_entry_rejected(self):
        with pytest.raises(DataError, match="duplicate"):
            Vocab.from_tokens(["[UNK]", "[MASK]", "x", "x"])

    def test_missing_reserved_token_rejected(self):
        with pytest.raises(DataError, match="\\[MASK\\]"):
            Vocab.from_tokens(["[UNK]", "x"])


class TestTokenSequence:
    def test_word_boundaries_cover_all_tokens(self, vocab):
        sequence = tokenize("Taran is great.", vocab)
        assert sequence.tokens == ("tara", "##n", "is", "great", ".")
        assert sequence.word_boundaries == ((0, 2), (2, 3), (3, 4), (4, 5))

    def test_boundary_reconstruction(self, vocab):
        text = "Berlin is the capital of Germany."
        sequence = tokenize(text, vocab)
        words = basic_tokenize(text)
        assert len(sequence.word_boundaries) == len(words)
        for word, (start, end) in zip(words, sequence.word_boundaries):
            joined = "".join(p.removeprefix("##") for p in sequence.tokens[start:end])
            if "[UNK]" not in sequence.tokens[start:end]:
                assert joined == word


def test_seeded_bulk_oracle_agreement(vocab):
    # Broad randomized sweep, independent of hypothesis shrinking behavior.
    rng = random.Random(20240817)
    alphabet = "abcde"
    mismatches = 0
    for _ in range(1200):
        tokens = {"".join(rng.choices(alphabet, k=rng.randint(1, 4))) for _ in range(rng.randint(1, 40))}
        tokens |= {"##" + "".join(rng.choices(alphabet, k=rng.randint(1, 3))) for _ in range(rng.randint(0, 10))}
        trial_vocab = Vocab.from_tokens(["[UNK]", "[MASK]", *sorted(tokens - {"[UNK]", "[MASK]"})])
        word = "".join(rng.choices(alphabet, k=rng.randint(1, 8)))
        if wordpiece(word, trial_vocab) != segment_oracle(word, set(trial_vocab.entries)):
            mismatches += 1
    assert mismatches == 0
