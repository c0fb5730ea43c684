# Subword tokenization and the whole-word fallback
#
# Questions are tokenized for the masked-token predictor with WordPiece:
# greedy longest-prefix matching against a fixed vocabulary, continuation
# pieces marked with "##". Rare names break into pieces or vanish into
# [UNK] entirely, and that failure mode drives a policy decision downstream.

from pathlib import Path

from clozecheck import Vocab, basic_tokenize, fallback_tokenize, is_single_piece, wordpiece

DATA = Path(__file__).parent / "data"

vocab = Vocab.load(DATA / "vocab.txt")
print(f"vocabulary of {len(vocab)} tokens, unk={vocab.unk_token!r}, mask={vocab.mask_token!r}")
print()

# Ordinary words come straight back; the pipeline is uncased throughout.
print("basic_tokenize('Berlin is great.') =", basic_tokenize("Berlin is great."))

# "taran" is not in the vocabulary, but "tara" and "##n" are: greedy
# longest-match splits it. A predictor with one mask slot can now only ever
# produce the first piece, which is merely a substring of the right answer.
print("wordpiece('taran') =", wordpiece("taran", vocab))

# No prefix of "burnaby" is known at all, so the whole word collapses.
print("wordpiece('burnaby') =", wordpiece("burnaby", vocab))

# is_single_piece is the operational test: can this entity occupy exactly
# one vocabulary slot?
for entity in ("Berlin", "Taran", "Burnaby"):
    print(f"is_single_piece({entity!r}) = {is_single_piece(entity, vocab)}")
print()

# When the masked entity is NOT a single piece, subword tokens cannot line
# up one-to-one with the answer slot. The query then falls back to plain
# whole-word segmentation (casing preserved, nothing split):
print("fallback_tokenize('Taran grew up in Burnaby.') =", fallback_tokenize("Taran grew up in Burnaby."))

# Out-of-vocabulary fallback tokens travel as strings on the wire; mapping
# them to vocabulary indices is the serving side's concern. Either way a
# multi-piece gold answer can never equal a single predicted token, so such
# questions are scored incorrect by construction rather than patched over.
