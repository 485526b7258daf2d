import pytest
import torch
from src.models import HeadDistanceAnchor, TokenFeatureConfig
from src.network.encoder import EncodedBatch, masked_max
from src.network.extractors import (HeadEntityExtractor, HeadRelativePositionEmbedding, TailRelationExtractor,
                                    build_he_features, head_context)

FEATURES = TokenFeatureConfig(hidden_dim=3, position_dim=2)
ENC_DIM = 6


def _encoded(lengths=(5, 3)):
    torch.manual_seed(0)
    lengths = torch.tensor(lengths)
    max_len = int(lengths.max())
    mask = torch.arange(max_len).unsqueeze(0) < lengths.unsqueeze(1)
    hidden = torch.randn(len(lengths), max_len, ENC_DIM) * mask.unsqueeze(-1)
    return EncodedBatch(hidden, masked_max(hidden, mask), mask, lengths)


def test_relative_position_clipping():
    """Test that distances beyond the clip share the boundary embedding."""
    embedding = HeadRelativePositionEmbedding(max_len=4, dim=2)

    # Call the method
    vectors = embedding(torch.tensor([-100, -4, 0, 4, 9]))

    # Assertions
    assert embedding.table.num_embeddings == 9
    assert torch.equal(vectors[0], vectors[1])
    assert torch.equal(vectors[3], vectors[4])
    assert torch.equal(vectors[2], embedding.table.weight[4])


def test_he_features_repeat_global_vector():
    """Test that every token of a sentence gets the sentence's global vector as auxiliary input."""
    enc = _encoded()

    # Call the method
    features = build_he_features(enc)

    # Assertions
    assert torch.equal(features.base, enc.hidden)
    assert torch.equal(features.aux[1, 2], enc.global_[1])
    assert features.aux.shape == (2, 5, ENC_DIM)


def test_head_context_start_anchor():
    """Test the head representation and the signed distances to the head start."""
    enc = _encoded()
    rows, heads = torch.tensor([0, 1, 0]), torch.tensor([[1, 2], [0, 0], [4, 4]])

    # Call the method
    context = head_context(enc, rows, heads)

    # Assertions
    assert torch.equal(context.representation[0], torch.cat([enc.hidden[0, 1], enc.hidden[0, 2]]))
    assert torch.equal(context.representation[1], torch.cat([enc.hidden[1, 0], enc.hidden[1, 0]]))
    assert context.distances[0].tolist() == [-1, 0, 1, 2, 3]
    assert context.distances[2].tolist() == [-4, -3, -2, -1, 0]


def test_head_context_end_anchor():
    """Test that the end anchor measures distances from the last head token."""
    enc = _encoded()

    # Call the method
    context = head_context(enc, torch.tensor([0]), torch.tensor([[1, 3]]), HeadDistanceAnchor.END)

    # Assertions
    assert context.distances[0].tolist() == [-3, -2, -1, 0, 1]


@pytest.mark.parametrize("head", [[0, 3], [2, 1], [-1, 0]])
def test_head_context_rejects_invalid_heads(head):
    """Test that a head outside its sentence or reversed raises."""
    enc = _encoded()

    # Assertions
    with pytest.raises(ValueError):
        head_context(enc, torch.tensor([1]), torch.tensor([head]))


def test_head_extractor_shapes():
    """Test the HE tagger over [h_i; g]."""
    extractor = HeadEntityExtractor(ENC_DIM, num_tags=4, C=10, features=FEATURES)
    enc = _encoded()

    # Call the method
    output = extractor(enc)
    spans = extractor.extract(enc)

    # Assertions
    assert extractor.tagger.start_layer.lstm.input_size == 2 * ENC_DIM
    assert output.start_probs.shape == (2, 5, 4)
    assert len(spans) == 2


@pytest.mark.parametrize("use_position, aux_dim", [(True, 3 * ENC_DIM + 2), (False, 3 * ENC_DIM)])
def test_tail_extractor_features(use_position, aux_dim):
    """Test that TER rows read [g; h^h; p^ht_i] from their own sentence."""
    extractor = TailRelationExtractor(ENC_DIM, num_tags=3, C=10, features=FEATURES, max_len=10,
                                      use_position=use_position)
    enc = _encoded()
    rows, heads = torch.tensor([1, 0]), torch.tensor([[0, 1], [3, 4]])

    # Call the method
    features = extractor.build_features(enc, rows, heads)

    # Assertions
    assert features.aux.shape == (2, 5, aux_dim)
    assert torch.equal(features.base[0], enc.hidden[1])
    assert features.lengths.tolist() == [3, 5]
    assert torch.equal(features.aux[0, 0, :ENC_DIM], enc.global_[1])
    assert torch.equal(features.aux[1, 2, ENC_DIM:3 * ENC_DIM], torch.cat([enc.hidden[0, 3], enc.hidden[0, 4]]))
    assert (extractor.position is None) != use_position


def test_tail_extractor_rows_are_independent():
    """Test that a TER row's output does not depend on the other rows of the batch."""
    extractor = TailRelationExtractor(ENC_DIM, num_tags=3, C=10, features=FEATURES, max_len=10)
    enc = _encoded()

    # Call the method
    together = extractor(enc, torch.tensor([0, 0]), torch.tensor([[0, 0], [2, 3]]))
    alone = extractor(enc, torch.tensor([0]), torch.tensor([[2, 3]]))

    # Assertions
    assert torch.allclose(together.start_probs[1], alone.start_probs[0], atol=1e-6)
    assert torch.allclose(together.end_probs[1], alone.end_probs[0], atol=1e-6)
