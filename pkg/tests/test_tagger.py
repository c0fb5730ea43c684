"""Rule tagger heuristics, span invariants, and the remote tagger client."""

from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from clozecheck import DataError, EntitySpan, EntityType, RemoteTagger, RuleTagger, TransportError, validate_spans
from clozecheck.errors import ConfigError

from .conftest import ner_responder


def assert_spans_well_formed(claim: str, spans):
    previous_end = 0
    for span in spans:
        assert claim[span.start : span.end] == span.text
        assert span.start >= previous_end
        previous_end = span.end


class TestValidateSpans:
    def test_out_of_bounds(self):
        with pytest.raises(DataError, match="out of bounds"):
            validate_spans("short", [EntitySpan("shorter", EntityType.MISC, 0, 7)])

    def test_text_mismatch(self):
        with pytest.raises(DataError, match="does not match"):
            validate_spans("Berlin is big.", [EntitySpan("berlin", EntityType.MISC, 0, 6)])

    def test_overlap(self):
        spans = [
            EntitySpan("Berlin i", EntityType.MISC, 0, 8),
            EntitySpan("is", EntityType.MISC, 7, 9),
        ]
        with pytest.raises(DataError, match="overlap"):
            validate_spans("Berlin is big.", spans)

    def test_names_claim_id(self):
        with pytest.raises(DataError, match="claim 42"):
            validate_spans("x", [EntitySpan("y", EntityType.MISC, 0, 1)], claim_id=42)


class TestRuleTagger:
    def test_gazetteer_and_capitalized_name(self):
        tagger = RuleTagger({"Burnaby": "LOCATION"})
        spans = tagger.tag("Taran grew up in Burnaby.")
        assert [(s.text, s.etype) for s in spans] == [
            ("Taran", EntityType.MISC),
            ("Burnaby", EntityType.LOCATION),
        ]
        assert_spans_well_formed("Taran grew up in Burnaby.", spans)

    def test_no_entities_at_all(self):
        assert RuleTagger().tag("the cat sat.") == []

    def test_year_like_token(self):
        spans = RuleTagger().tag("He was born in 1963.")
        assert len(spans) == 1
        assert spans[0].text == "1963"
        assert spans[0].etype in (EntityType.NUMBER, EntityType.DATE)

    def test_plain_number_token(self):
        spans = RuleTagger().tag("the recipe needs 250 grams of flour.")
        assert [(s.text, s.etype) for s in spans] == [("250", EntityType.NUMBER)]

    def test_sentence_initial_function_word_suppressed(self):
        assert RuleTagger().tag("The cat sat.") == []

    def test_sentence_initial_function_word_rescued_by_gazetteer(self):
        spans = RuleTagger({"The Hague": "LOCATION"}).tag("The Hague hosts the court.")
        assert [s.text for s in spans] == ["The Hague"]

    def test_capitalized_run_stays_together(self):
        spans = RuleTagger().tag("she met Taran Killam yesterday.")
        assert [s.text for s in spans] == ["Taran Killam"]

    def test_gazetteer_longest_match_wins(self):
        tagger = RuleTagger({"York": "LOCATION", "New York": "LOCATION"})
        spans = tagger.tag("people love New York.")
        assert [s.text for s in spans] == ["New York"]

    def test_duplicate_surface_forms_each_get_a_span(self):
        spans = RuleTagger().tag("Paris loves Paris.")
        assert [s.text for s in spans] == ["Paris", "Paris"]
        assert spans[0].start != spans[1].start

    def test_empty_claim_rejected(self):
        with pytest.raises(ValueError):
            RuleTagger().tag("")

    def test_empty_gazetteer_key_rejected(self):
        with pytest.raises(ConfigError):
            RuleTagger({"": "LOCATION"})

    def test_punctuation_breaks_runs(self):
        spans = RuleTagger().tag("she saw Berlin, Germany once.")
        assert [s.text for s in spans] == ["Berlin", "Germany"]

    def test_gazetteer_requires_word_boundaries(self):
        spans = RuleTagger({"Ber": "LOCATION"}).tag("the word Berlin contains it.")
        # "Ber" must not match inside "Berlin"; the cap-run rule still fires.
        assert [s.text for s in spans] == ["Berlin"]

    def test_determinism(self):
        tagger = RuleTagger({"Burnaby": "LOCATION"})
        claim = "Taran grew up in Burnaby in 1963."
        assert tagger.tag(claim) == tagger.tag(claim)

    @given(
        words=st.lists(
            st.sampled_from(["Alice", "Borneo", "went", "to", "the", "market", "in", "1984", "Microsoft", "quietly"]),
            min_size=1,
            max_size=10,
        )
    )
    @settings(max_examples=200, deadline=None)
    def test_span_invariants_on_random_sentences(self, words):
        claim = " ".join(words) + "."
        spans = RuleTagger({"Borneo": "LOCATION"}).tag(claim)
        assert_spans_well_formed(claim, spans)


class TestRemoteTagger:
    def test_differential_against_rule_tagger(self, start_stub):
        claim = "Taran grew up in Burnaby."
        reference = RuleTagger({"Burnaby": "LOCATION"}).tag(claim)
        server = start_stub(
            ner_responder(
                {claim: [{"text": s.text, "type": s.etype.value, "start": s.start, "end": s.end} for s in reference]}
            )
        )
        assert RemoteTagger(server.endpoint).tag(claim) == reference

    def test_empty_entity_list_is_legal(self, start_stub):
        # A tagger whose type inventory has no movie titles or genres finds
        # nothing here; the claim is simply counted unconverted downstream.
        server = start_stub(ner_responder({}))
        assert RemoteTagger(server.endpoint).tag("A View to a Kill is an action movie.") == []

    def test_span_past_end_is_data_error(self, start_stub):
        server = start_stub(
            ner_responder({"Tiny.": [{"text": "Tiny.x", "type": "MISC", "start": 0, "end": 6}]})
        )
        with pytest.raises(DataError, match="out of bounds"):
            RemoteTagger(server.endpoint).tag("Tiny.")

    def test_unknown_type_maps_to_misc(self, start_stub):
        server = start_stub(
            ner_responder({"Casablanca is a movie.": [{"text": "Casablanca", "type": "WORK_OF_ART", "start": 0, "end": 10}]})
        )
        spans = RemoteTagger(server.endpoint).tag("Casablanca is a movie.")
        assert spans[0].etype is EntityType.MISC

    def test_unreachable_endpoint_is_transport_error(self):
        tagger = RemoteTagger("http://127.0.0.1:9/", timeout=0.2, retries=1, backoff=0.01)
        with pytest.raises(TransportError):
            tagger.tag("Berlin is big.")

    def test_recovers_after_transient_500(self, start_stub):
        claim = "Berlin is big."
        server = start_stub(
            ner_responder({claim: [{"text": "Berlin", "type": "LOCATION", "start": 0, "end": 6}]}),
            fail_first=2,
        )
        tagger = RemoteTagger(server.endpoint, retries=3, backoff=0.01)
        assert [s.text for s in tagger.tag(claim)] == ["Berlin"]
        assert len(server.requests) == 3

    def test_overlapping_response_spans_rejected(self, start_stub):
        claim = "Berlin is big."
        server = start_stub(
            ner_responder(
                {
                    claim: [
                        {"text": "Berlin is", "type": "MISC", "start": 0, "end": 9},
                        {"text": "is big", "type": "MISC", "start": 7, "end": 13},
                    ]
                }
            )
        )
        with pytest.raises(DataError, match="overlap"):
            RemoteTagger(server.endpoint).tag(claim)
