import pytest
import torch
from unittest.mock import patch
from src.models.tagging import TypedSpan
from src.network.batching import TaggingTargets
from src.network.hbt import HBTInput, HierarchicalBoundaryTagger, TaggerOutput, predicted_distances
from tests.conftest import check_gradients

BASE, AUX, HIDDEN, TAGS, C = 4, 3, 5, 3, 10


def _inputs(lengths=(6, 4), dtype=torch.float32, seed=0):
    generator = torch.Generator().manual_seed(seed)
    lengths = torch.tensor(lengths)
    max_len = int(lengths.max())
    mask = torch.arange(max_len).unsqueeze(0) < lengths.unsqueeze(1)
    base = torch.randn(len(lengths), max_len, BASE, generator=generator, dtype=dtype) * mask.unsqueeze(-1)
    aux = torch.randn(len(lengths), max_len, AUX, generator=generator, dtype=dtype)
    return HBTInput(base, aux, mask, lengths)


def _gold(lengths=(6, 4)):
    max_len = max(lengths)
    start = torch.zeros(len(lengths), max_len, dtype=torch.long)
    end = torch.zeros(len(lengths), max_len, dtype=torch.long)
    start[0, 1], end[0, 3] = 1, 1
    start[1, 0], end[1, 0] = 2, 2
    distances = torch.stack([
        predicted_distances(start[k:k + 1], torch.tensor([n]), C)[0] for k, n in enumerate(lengths)
    ])
    return TaggingTargets(start, end, distances)


def _tagger(hierarchical=True):
    torch.manual_seed(0)
    return HierarchicalBoundaryTagger(BASE, AUX, HIDDEN, TAGS, C, position_dim=2, hierarchical=hierarchical)


def test_output_distributions():
    """Test that every token gets a start and an end distribution over the tag space."""
    tagger = _tagger()

    # Call the method
    output = tagger(_inputs())

    # Assertions
    assert output.start_probs.shape == (2, 6, TAGS)
    assert output.end_probs.shape == (2, 6, TAGS)
    assert torch.allclose(output.start_probs.sum(-1), torch.ones(2, 6))
    assert torch.allclose(output.end_probs.sum(-1), torch.ones(2, 6))
    assert not output.teacher_forced


def test_predicted_distances():
    """Test distances of predicted start tags with the sentinel at padding."""
    start_tags = torch.tensor([[0, 2, 0, 0, 1, 0], [0, 0, 0, 0, 0, 0]])

    # Call the method
    distances = predicted_distances(start_tags, torch.tensor([6, 3]), C)

    # Assertions
    assert distances.tolist() == [[C, 0, 1, 2, 0, 1], [C, C, C, C, C, C]]


def test_gold_distances_feed_the_end_layer():
    """Test that training-time end tagging reads the gold start distances."""
    tagger, inputs, gold = _tagger(), _inputs(), _gold()
    seen = []
    original = HierarchicalBoundaryTagger.forward_end

    def spy(self, start_states, inputs, distances):
        seen.append(distances.clone())
        return original(self, start_states, inputs, distances)

    # Call the method
    with patch.object(HierarchicalBoundaryTagger, "forward_end", spy):
        output = tagger(inputs, gold)

    # Assertions
    assert output.teacher_forced
    assert torch.equal(seen[0], gold.distances)


def test_predicted_distances_feed_the_end_layer_at_inference():
    """Test that inference-time end tagging reads the distances of the argmax start tags."""
    tagger, inputs = _tagger(), _inputs()
    seen = []
    original = HierarchicalBoundaryTagger.forward_end

    def spy(self, start_states, inputs, distances):
        seen.append(distances.clone())
        return original(self, start_states, inputs, distances)

    # Call the method
    with patch.object(HierarchicalBoundaryTagger, "forward_end", spy):
        output = tagger(inputs)

    # Assertions
    expected = predicted_distances(output.start_probs.argmax(-1), inputs.lengths, C)
    assert torch.equal(seen[0], expected)


def test_distance_above_sentinel_is_rejected():
    """Test that a start distance larger than C raises."""
    tagger, inputs = _tagger(), _inputs()
    _, states = tagger.forward_start(inputs)
    distances = torch.full(inputs.mask.shape, C + 1, dtype=torch.long)

    # Assertions
    with pytest.raises(ValueError):
        tagger.forward_end(states, inputs, distances)


def test_loss_requires_teacher_forcing():
    """Test that the loss refuses outputs computed from predicted distances."""
    tagger, inputs, gold = _tagger(), _inputs(), _gold()

    # Assertions
    with pytest.raises(ValueError):
        HierarchicalBoundaryTagger.loss(tagger(inputs), gold, inputs.mask)


def test_loss_ignores_padding():
    """Test that a padded sequence has the same loss as when tagged alone."""
    tagger, inputs, gold = _tagger(), _inputs(), _gold()
    batched = HierarchicalBoundaryTagger.loss(tagger(inputs, gold), gold, inputs.mask)

    alone_inputs = HBTInput(inputs.base[1:, :4], inputs.aux[1:, :4], inputs.mask[1:, :4], inputs.lengths[1:])
    alone_gold = TaggingTargets(gold.start[1:, :4], gold.end[1:, :4], gold.distances[1:, :4])

    # Call the method
    alone = HierarchicalBoundaryTagger.loss(tagger(alone_inputs, alone_gold), alone_gold, alone_inputs.mask)

    # Assertions
    assert batched.shape == (2,)
    assert torch.allclose(batched[1], alone[0], atol=1e-6)
    assert (batched > 0).all()


def test_loss_is_finite_for_saturated_probabilities():
    """Test that a zero probability on the gold tag gives a large but finite loss."""
    gold = _gold()
    probs = torch.zeros(2, 6, TAGS)
    probs[..., 0] = 1.0
    output = TaggerOutput(probs, probs, teacher_forced=True)

    # Call the method
    loss = HierarchicalBoundaryTagger.loss(output, gold, torch.ones(2, 6, dtype=torch.bool))

    # Assertions
    assert torch.isfinite(loss).all()


def test_loss_is_zero_when_gold_tags_are_certain():
    """Test that probability one on every gold start and end tag gives a zero loss."""
    gold, mask = _gold(), _inputs().mask
    output = TaggerOutput(torch.nn.functional.one_hot(gold.start, TAGS).float(),
                          torch.nn.functional.one_hot(gold.end, TAGS).float(), teacher_forced=True)

    # Call the method
    loss = HierarchicalBoundaryTagger.loss(output, gold, mask)

    # Assertions
    assert torch.allclose(loss, torch.zeros(2))


def test_loss_of_uniform_distributions():
    """Test that uniform start and end distributions over k tags cost 2 log k per token."""
    gold, mask = _gold(), _inputs().mask
    probs = torch.full((2, 6, TAGS), 1.0 / TAGS)
    output = TaggerOutput(probs, probs, teacher_forced=True)

    # Call the method
    loss = HierarchicalBoundaryTagger.loss(output, gold, mask)

    # Assertions
    expected = 2 * torch.log(torch.tensor(float(TAGS)))
    assert torch.allclose(loss, expected.expand(2), atol=1e-6)


def test_zero_start_projection_gives_uniform_start_distribution():
    """Test that a zero start projection yields uniform start probabilities and no extracted span."""
    tagger, inputs = _tagger(), _inputs()
    with torch.no_grad():
        tagger.start_projection.weight.zero_()
        tagger.start_projection.bias.zero_()

    # Call the methods
    start_probs, _ = tagger.forward_start(inputs)
    spans = tagger.extract(inputs)

    # Assertions
    assert torch.allclose(start_probs, torch.full((2, 6, TAGS), 1.0 / TAGS))
    assert spans == [set(), set()]


def test_flat_tagger_has_no_end_layer():
    """Test that the non-hierarchical variant reads end tags off the start layer."""
    tagger = _tagger(hierarchical=False)

    # Call the method
    output = tagger(_inputs(), _gold())

    # Assertions
    assert tagger.end_layer is None and tagger.distance_embedding is None
    assert tagger.end_projection.in_features == 2 * HIDDEN
    assert output.end_probs.shape == (2, 6, TAGS)


def test_start_layer_matches_reference_recurrence():
    """Test the forward direction of the start layer against a hand-written LSTM cell loop."""
    tagger, inputs = _tagger(), _inputs(lengths=(5,))
    lstm = tagger.start_layer.lstm
    x = torch.cat([inputs.base, inputs.aux], dim=-1)[0]

    h = torch.zeros(HIDDEN)
    c = torch.zeros(HIDDEN)
    expected = []
    for t in range(5):
        gates = lstm.weight_ih_l0 @ x[t] + lstm.bias_ih_l0 + lstm.weight_hh_l0 @ h + lstm.bias_hh_l0
        i, f, g, o = gates.chunk(4)
        c = torch.sigmoid(f) * c + torch.sigmoid(i) * torch.tanh(g)
        h = torch.sigmoid(o) * torch.tanh(c)
        expected.append(h)

    # Call the method
    _, states = tagger.forward_start(inputs)

    # Assertions
    assert torch.allclose(states[0, :, :HIDDEN], torch.stack(expected), atol=1e-5)


def test_extract_decodes_argmax_tags():
    """Test extraction with projections forced to predict tag 1 as both start and end everywhere."""
    tagger, inputs = _tagger(), _inputs()
    with torch.no_grad():
        for projection in (tagger.start_projection, tagger.end_projection):
            projection.weight.zero_()
            projection.bias.copy_(torch.tensor([0.0, 5.0, 1.0]))

    # Call the method
    spans = tagger.extract(inputs)

    # Assertions
    assert spans[0] == {TypedSpan(i, i, 1) for i in range(6)}
    assert spans[1] == {TypedSpan(i, i, 1) for i in range(4)}


def test_extract_is_invariant_to_positive_scaling():
    """Test that scaling the output projections leaves argmax decoding unchanged."""
    tagger, inputs = _tagger(), _inputs()
    before = tagger.extract(inputs)
    with torch.no_grad():
        for projection in (tagger.start_projection, tagger.end_projection):
            projection.weight.mul_(3.0)
            projection.bias.mul_(3.0)

    # Assertions
    assert tagger.extract(inputs) == before


def test_gradients_match_finite_differences():
    """Test analytic gradients of the tagger loss against central differences in float64."""
    tagger = _tagger().double()
    inputs, gold = _inputs(dtype=torch.float64), _gold()

    def loss_fn():
        return HierarchicalBoundaryTagger.loss(tagger(inputs, gold), gold, inputs.mask).mean()

    # Call the method
    checked = check_gradients(tagger, loss_fn)

    # Assertions
    assert checked > 0
