# From claims to fill-in-the-blank questions
#
# A claim usually carries its information in named entities. Hiding one
# entity at a time turns a claim into questions whose single correct answer
# is the hidden entity itself. This script walks through that transformation
# with the built-in rule tagger.

import json
from pathlib import Path

from clozecheck import ClaimRecord, GoldLabel, RuleTagger, conversion_stats, generate, load_claims

DATA = Path(__file__).parent / "data"

# The rule tagger works from three signals: a gazetteer of known names,
# runs of capitalized tokens, and digit patterns. Sentence-initial words
# like "The" are only orthography, so a short function-word list keeps them
# out unless the gazetteer says otherwise.
gazetteer = json.loads((DATA / "gazetteer.json").read_text())
tagger = RuleTagger(gazetteer)

claim = "Berlin is the capital of Germany."
for span in tagger.tag(claim):
    print(f"  {span.etype.value:<10} {span.text!r} at [{span.start}:{span.end})")

# Each span becomes one question. The other entities stay visible: a masked
# language model needs the surrounding context to recover the hidden token.
record = ClaimRecord(id=1, claim=claim, gold_label=GoldLabel.SUPPORTS, verifiable=True)
for question in generate(record, tagger.tag(claim)):
    print(f"  Q{question.question_index}: {question.question_text}   -> answer {question.answer_text!r}")
    assert question.reconstruct() == claim  # masking is always reversible

# A claim in which the tagger finds nothing produces zero questions and
# counts against conversion accuracy ("the cat sat on the mat." below).
# Taggers trained on other type inventories fail the same way on entities
# they do not know, e.g. movie titles; the heuristic tagger here happens to
# catch capitalized title words as MISC runs instead.
print()
claims = load_claims(DATA / "claims.jsonl")
questions = []
for record in claims:
    questions.extend(generate(record, tagger.tag(record.claim)))

stats = conversion_stats(claims, questions)
print(f"claims: {stats.total_claims}")
print(f"converted (at least one question): {stats.converted_claims}")
print(f"conversion accuracy: {float(stats.conversion_accuracy):.2f}%")
print(f"questions: {stats.total_questions}, median per converted claim: {stats.median_questions_per_claim}")
