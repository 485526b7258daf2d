import pytest
import torch
import torch.nn as nn
from src.models import TokenFeatureConfig, TrainConfig
from src.network.model import JointExtractor
from src.services.corpus import build_vocabularies
from src.services.synthetic import figure_sentence, generate_corpus

TINY_FEATURES = dict(word_dim=6, char_emb_dim=4, char_cnn_window=3, char_cnn_filters=5,
                     pos_dim=3, hidden_dim=4, position_dim=3)


def make_config(**overrides) -> TrainConfig:
    """Tiny dimensions, no dropout, short schedule."""
    settings = dict(features=TokenFeatureConfig(**TINY_FEATURES), dropout=0.0, max_sentence_length=40,
                    batch_size=8, max_epochs=2, patience=1, seed=7)
    settings.update(overrides)
    return TrainConfig(**settings)


def check_gradients(module: nn.Module, loss_fn, samples: int = 3, eps: float = 1e-6,
                    rtol: float = 1e-4, atol: float = 1e-8, seed: int = 0) -> int:
    """
    Compare autograd gradients against central finite differences on sampled entries of every parameter.

    Padding rows of embeddings are skipped: their gradient is zero by construction.
    Returns the number of entries checked.
    """
    padding_rows = {id(m.weight): m.padding_idx for m in module.modules()
                    if isinstance(m, nn.Embedding) and m.padding_idx is not None}
    parameters = [(name, p) for name, p in module.named_parameters() if p.requires_grad]
    analytic = torch.autograd.grad(loss_fn(), [p for _, p in parameters], allow_unused=True)
    generator = torch.Generator().manual_seed(seed)
    checked = 0

    for (name, p), grad in zip(parameters, analytic):
        grad = torch.zeros_like(p) if grad is None else grad
        flat, flat_grad = p.data.view(-1), grad.reshape(-1)
        candidates = torch.arange(flat.numel())
        if id(p) in padding_rows:
            row = padding_rows[id(p)]
            candidates = candidates[(candidates // p.size(1)) != row]
        picks = candidates[torch.randperm(candidates.numel(), generator=generator)[:samples]]

        for index in picks.tolist():
            original = flat[index].item()
            flat[index] = original + eps
            plus = loss_fn().item()
            flat[index] = original - eps
            minus = loss_fn().item()
            flat[index] = original

            numeric = (plus - minus) / (2 * eps)
            value = flat_grad[index].item()
            assert abs(value - numeric) <= rtol * max(abs(value), abs(numeric)) + atol, \
                f"{name}[{index}]: analytic {value} vs numeric {numeric}"
            checked += 1
    return checked


@pytest.fixture(scope="function")
def tiny_config():
    """Fixture to provide a TrainConfig with toy dimensions."""
    return make_config()


@pytest.fixture(scope="function")
def figure():
    """Fixture to provide the Trump / United States / New York City sentence."""
    return figure_sentence()


@pytest.fixture(scope="function")
def small_corpus():
    """Fixture to provide a small synthetic corpus."""
    return generate_corpus(12, seed=3)


@pytest.fixture(scope="function")
def vocabularies(small_corpus, figure):
    """Fixture to provide vocabularies covering the small corpus and the figure sentence."""
    return build_vocabularies(small_corpus + [figure])


@pytest.fixture(scope="function")
def tiny_model(vocabularies, tiny_config):
    """Fixture to provide an untrained model with toy dimensions."""
    torch.manual_seed(0)
    return JointExtractor(vocabularies, tiny_config)
