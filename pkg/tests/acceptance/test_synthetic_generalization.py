from pathlib import Path
import pytest
from src.commands.common import load_train_config
from src.services.evaluator import score, score_by_category
from src.services.extraction import predict_corpus
from src.services.synthetic import generate_corpus
from src.services.trainer import fit

pytestmark = pytest.mark.slow

SYNTHETIC_CONFIG = Path(__file__).resolve().parents[2] / "resources" / "configs" / "synthetic.env"


def test_synthetic_corpus_generalizes():
    """Test dev F1 of at least 0.90 on the templated corpus with the scaled-down default settings."""
    train = generate_corpus(500, seed=0, prefix="train")
    dev = generate_corpus(100, seed=1, prefix="dev")
    config = load_train_config(SYNTHETIC_CONFIG, seed=13)

    # Call the method
    checkpoint = fit(train, dev, config)
    predictions = predict_corpus(checkpoint.model, dev)

    # Assertions
    assert config.features.hidden_dim == 50
    assert checkpoint.dev_f1 >= 0.90
    assert score(dev, predictions).f1 == pytest.approx(checkpoint.dev_f1)
    assert "SEO" in score_by_category(dev, predictions)
