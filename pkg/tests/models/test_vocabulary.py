from collections import Counter
import pytest
from pydantic import ValidationError
from src.models import LabelVocabulary, TagVocabulary


def test_from_counts_orders_by_frequency():
    """Test that reserved labels come first, then labels by descending count and name."""
    # Call the method
    vocab = LabelVocabulary.from_counts(Counter({"b": 2, "a": 2, "c": 5, "rare": 1}), min_freq=2)

    # Assertions
    assert vocab.labels == ["<pad>", "<unk>", "c", "a", "b"]
    assert vocab.id("rare") == vocab.id("<unk>") == 1
    assert vocab.label(2) == "c"


def test_id_without_unknown_raises():
    """Test that a vocabulary without an unknown entry rejects unseen labels."""
    vocab = LabelVocabulary(labels=["O", "PER"])

    with pytest.raises(KeyError):
        vocab.id("LOC")


def test_labels_must_be_unique():
    """Test that duplicated labels are rejected."""
    with pytest.raises(ValidationError):
        LabelVocabulary(labels=["a", "a"])


def test_tag_vocabulary_reserves_outside():
    """Test that both tag spaces keep "O" at id 0."""
    # Call the method
    tags = TagVocabulary.from_labels(["PER", "LOC", "PER"], ["born_in"])

    # Assertions
    assert tags.entity_types.labels == ["O", "LOC", "PER"]
    assert tags.relation_types.labels == ["O", "born_in"]

    with pytest.raises(ValidationError):
        TagVocabulary(entity_types=LabelVocabulary(labels=["PER"]), relation_types=tags.relation_types)


def test_binary_collapses_entity_types():
    """Test that the binary tag space has a single head label and keeps the relations."""
    tags = TagVocabulary.from_labels(["PER", "LOC", "ORG"], ["born_in", "works_for"])

    # Call the method
    binary = tags.binary()

    # Assertions
    assert binary.entity_types.labels == ["O", "ENTITY"]
    assert binary.relation_types == tags.relation_types
