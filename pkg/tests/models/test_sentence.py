import pytest
from pydantic import ValidationError
from src.models import AnnotatedSentence, EntitySpan, TokenSequence, Triplet


def _record(**overrides):
    record = {
        "id": "s1",
        "tokens": ["Ann", "lives", "in", "Rome"],
        "pos": ["NNP", "VBZ", "IN", "NNP"],
        "triplets": [{"head": {"start": 0, "end": 0, "type": "PER"}, "relation": "lives_in",
                      "tail": {"start": 3, "end": 3, "type": "LOC"}}],
    }
    record.update(overrides)
    return record


def test_flat_record_is_accepted():
    """Test that the flat native layout populates the nested sentence."""
    # Call the method
    sentence = AnnotatedSentence.model_validate(_record())

    # Assertions
    assert sentence.n == 4
    assert sentence.sentence.pos_tags[0] == "NNP"
    assert sentence.triplets[0].head.entity_type == "PER"


def test_to_record_round_trip():
    """Test that to_record produces a record that validates back to the same sentence."""
    sentence = AnnotatedSentence.model_validate(_record())

    # Call the method
    record = sentence.to_record()

    # Assertions
    assert list(record)[0] == "id"
    assert record["triplets"][0]["head"] == {"start": 0, "end": 0, "type": "PER"}
    assert AnnotatedSentence.model_validate(record) == sentence


def test_to_record_omits_missing_types():
    """Test that spans without a type are written without a type key."""
    sentence = AnnotatedSentence.model_validate(_record(triplets=[
        {"head": {"start": 0, "end": 0}, "relation": "lives_in", "tail": {"start": 3, "end": 3}},
    ]))

    # Assertions
    assert sentence.to_record()["triplets"][0]["tail"] == {"start": 3, "end": 3}


@pytest.mark.parametrize("tokens,pos", [
    ([], []),
    (["a", ""], ["DT", "NN"]),
    (["a", "b"], ["DT"]),
])
def test_token_sequence_validation(tokens, pos):
    """Test that empty sentences, empty tokens and misaligned POS tags are rejected."""
    with pytest.raises(ValidationError):
        TokenSequence(tokens=tokens, pos=pos)


def test_span_order_is_validated():
    """Test that a span cannot end before it starts."""
    with pytest.raises(ValidationError):
        EntitySpan(start=3, end=2)


def test_out_of_range_span_is_rejected():
    """Test that a span past the last token is rejected."""
    record = _record()
    record["triplets"][0]["tail"]["end"] = 4

    with pytest.raises(ValidationError):
        AnnotatedSentence.model_validate(record)


def test_duplicate_triplets_are_rejected():
    """Test that a sentence cannot hold the same triplet twice."""
    record = _record()
    record["triplets"] = record["triplets"] * 2

    with pytest.raises(ValidationError):
        AnnotatedSentence.model_validate(record)


def test_triplets_differing_only_in_types_are_duplicates():
    """Test that entity types do not make two triplets with the same offsets and relation distinct."""
    record = _record()
    retyped = {**record["triplets"][0], "head": {"start": 0, "end": 0, "type": "ORG"}}
    record["triplets"] = record["triplets"] + [retyped]

    with pytest.raises(ValidationError, match="Duplicate triplet"):
        AnnotatedSentence.model_validate(record)


def test_head_spans_are_distinct_and_ordered(figure):
    """Test that head_spans lists each head once in order of first appearance."""
    # Call the method
    heads = figure.head_spans()

    # Assertions
    assert [h.bounds for h in heads] == [(0, 0)]


def test_triplet_key_ignores_types():
    """Test that the matching key is made of offsets and relation only."""
    typed = Triplet(head=EntitySpan(start=0, end=1, type="PER"), relation="r", tail=EntitySpan(start=3, end=3))
    untyped = Triplet(head=EntitySpan(start=0, end=1), relation="r", tail=EntitySpan(start=3, end=3, type="LOC"))

    # Assertions
    assert typed.key() == untyped.key() == (0, 1, "r", 3, 3)
    assert typed != untyped
