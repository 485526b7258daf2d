import json
import pytest
import torch
from src.network.model import JointExtractor
from src.storage import Checkpoint, load_checkpoint, read_manifest, save_checkpoint
from src.utils.constants import CHECKPOINT_MANIFEST, CHECKPOINT_SCHEMA, CHECKPOINT_WEIGHTS
from src.utils.exceptions import CheckpointError
from tests.conftest import make_config


@pytest.fixture
def checkpoint(tiny_model, vocabularies, tiny_config):
    """Fixture to provide a checkpoint of the untrained tiny model."""
    return Checkpoint(tiny_model, vocabularies, tiny_config, dev_f1=0.75, global_step=12, epoch=3)


def test_save_layout(tmp_path, checkpoint):
    """Test that a checkpoint directory holds the manifest, the weights and the vocabularies."""
    # Call the method
    root = save_checkpoint(tmp_path / "model", checkpoint)

    # Assertions
    assert (root / CHECKPOINT_MANIFEST).is_file()
    assert (root / CHECKPOINT_WEIGHTS).is_file()
    assert (root / "vocab" / "tokens.txt").is_file()
    manifest = json.loads((root / CHECKPOINT_MANIFEST).read_text(encoding="utf-8"))
    assert manifest["schema_id"] == CHECKPOINT_SCHEMA
    assert manifest["global_step"] == 12


def test_loaded_model_extracts_identically(tmp_path, checkpoint, figure, small_corpus):
    """Test that a reloaded model has the same weights and the same predictions."""
    save_checkpoint(tmp_path, checkpoint)

    # Call the method
    loaded = load_checkpoint(tmp_path)

    # Assertions
    original = checkpoint.model.state_dict()
    assert all(torch.equal(original[k], v) for k, v in loaded.model.state_dict().items())
    assert loaded.config == checkpoint.config
    assert loaded.dev_f1 == 0.75 and loaded.epoch == 3
    assert not loaded.model.training
    for s in [figure] + small_corpus[:3]:
        assert loaded.model.extract_triplets(s.sentence) == checkpoint.model.extract_triplets(s.sentence)


def test_ablation_config_is_restored(tmp_path, vocabularies):
    """Test that a checkpoint rebuilds the architecture it was trained with."""
    config = make_config(no_pht=True, pipeline_mode=True)
    save_checkpoint(tmp_path, Checkpoint(JointExtractor(vocabularies, config), vocabularies, config, 0.0, 0))

    # Call the method
    loaded = load_checkpoint(tmp_path)

    # Assertions
    assert loaded.model.tail_extractor.position is None
    assert loaded.model.ter_encoder is not None


def test_missing_manifest(tmp_path):
    """Test that a directory without a manifest is not a checkpoint."""
    # Assertions
    with pytest.raises(CheckpointError):
        read_manifest(tmp_path)


def test_foreign_schema(tmp_path, checkpoint):
    """Test that another checkpoint layout version is rejected."""
    save_checkpoint(tmp_path, checkpoint)
    path = tmp_path / CHECKPOINT_MANIFEST
    manifest = json.loads(path.read_text(encoding="utf-8"))
    manifest["schema_id"] = "other/9"
    path.write_text(json.dumps(manifest), encoding="utf-8")

    # Assertions
    with pytest.raises(CheckpointError, match="Unsupported checkpoint schema"):
        load_checkpoint(tmp_path)


def test_malformed_manifest(tmp_path):
    """Test that an unreadable manifest raises a checkpoint error."""
    (tmp_path / CHECKPOINT_MANIFEST).write_text("{not json", encoding="utf-8")

    # Assertions
    with pytest.raises(CheckpointError):
        read_manifest(tmp_path)


def test_missing_weights(tmp_path, checkpoint):
    """Test that a checkpoint without its weight file fails to load."""
    save_checkpoint(tmp_path, checkpoint)
    (tmp_path / CHECKPOINT_WEIGHTS).unlink()

    # Assertions
    with pytest.raises(CheckpointError, match="weights not found"):
        load_checkpoint(tmp_path)


def test_weights_of_another_architecture(tmp_path, checkpoint, vocabularies):
    """Test that weights that do not fit the manifest's config raise a checkpoint error."""
    save_checkpoint(tmp_path, checkpoint)
    other = JointExtractor(vocabularies, make_config(no_hierarchy=True))
    torch.save(other.state_dict(), tmp_path / CHECKPOINT_WEIGHTS)

    # Assertions
    with pytest.raises(CheckpointError, match="do not fit"):
        load_checkpoint(tmp_path)
