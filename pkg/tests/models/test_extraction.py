from src.models import EntitySpan, ExtractionResult, HeadExtraction, TailMention


def _span(start, end, entity_type=None):
    return EntitySpan(start=start, end=end, entity_type=entity_type)


def test_triplets_are_assembled_per_head():
    """Test that each head pairs with each of its tails, with entity types dropped."""
    result = ExtractionResult(heads=[
        HeadExtraction(head=_span(0, 0, "PER"), tails=[
            TailMention(tail=_span(12, 14), relation="Born_In"),
            TailMention(tail=_span(6, 7), relation="President_Of"),
        ]),
    ])

    # Call the method
    triplets = result.triplets

    # Assertions
    assert [t.key() for t in triplets] == [(0, 0, "Born_In", 12, 14), (0, 0, "President_Of", 6, 7)]
    assert all(t.head.entity_type is None for t in triplets)


def test_same_span_heads_are_deduplicated():
    """Test that two heads on the same span with different types give each triplet once."""
    tails = [TailMention(tail=_span(3, 3), relation="r")]
    result = ExtractionResult(heads=[
        HeadExtraction(head=_span(0, 1, "PER"), tails=tails),
        HeadExtraction(head=_span(0, 1, "ORG"), tails=tails),
    ])

    # Assertions
    assert len(result.triplets) == 1


def test_head_without_tails():
    """Test that a head with no tails contributes no triplet."""
    result = ExtractionResult(heads=[HeadExtraction(head=_span(2, 2, "LOC"))])

    # Assertions
    assert result.triplets == []
