import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Union
import torch
from pydantic import ValidationError
from .corpus_store import CorpusStore
from ..models.config import TrainConfig
from ..models.manifest import CheckpointManifest
from ..models.vocabulary import CorpusVocabularies
from ..network.model import JointExtractor
from ..utils.constants import CHECKPOINT_MANIFEST, CHECKPOINT_SCHEMA, CHECKPOINT_WEIGHTS
from ..utils.exceptions import CheckpointError, VocabularyError
from ..utils.file_utils import ensure_dir

# Configure logging
logger = logging.getLogger(__name__)


@dataclass
class Checkpoint:
    ''' A trained model with everything needed to rebuild it '''
    model: JointExtractor
    vocabularies: CorpusVocabularies
    config: TrainConfig
    dev_f1: float
    global_step: int
    epoch: int = 0


def save_checkpoint(directory: Union[str, Path], checkpoint: Checkpoint) -> Path:
    '''
    Write a checkpoint directory: manifest.json, model.pt (state dict) and vocab/.

    Returns:
        Path: The checkpoint directory.
    '''
    root = ensure_dir(directory)
    manifest = CheckpointManifest(
        config=checkpoint.config,
        dev_f1=checkpoint.dev_f1,
        global_step=checkpoint.global_step,
        epoch=checkpoint.epoch,
    )

    try:
        torch.save(checkpoint.model.state_dict(), root / CHECKPOINT_WEIGHTS)
        CorpusStore(root).save_vocabularies(checkpoint.vocabularies)
        (root / CHECKPOINT_MANIFEST).write_text(manifest.model_dump_json(indent=2), encoding='utf-8')
    except (OSError, VocabularyError) as e:
        logger.error(f"Failed to write checkpoint to {root}: {e}")
        raise CheckpointError(f"Failed to write checkpoint to {root}: {e}")

    logger.info(f"Saved checkpoint to {root} (dev F1 {checkpoint.dev_f1:.4f}, step {checkpoint.global_step})")
    return root


def read_manifest(directory: Union[str, Path]) -> CheckpointManifest:
    '''
    Read and validate the manifest of a checkpoint directory.

    Raises:
        CheckpointError: If the manifest is missing, malformed or of another schema.
    '''
    manifest_path = Path(directory) / CHECKPOINT_MANIFEST
    if not manifest_path.is_file():
        logger.error(f"Checkpoint manifest not found: {manifest_path}")
        raise CheckpointError(f"Checkpoint manifest not found: {manifest_path}")

    try:
        manifest = CheckpointManifest.model_validate(json.loads(manifest_path.read_text(encoding='utf-8')))
    except (json.JSONDecodeError, ValidationError) as e:
        logger.error(f"Invalid checkpoint manifest {manifest_path}: {e}")
        raise CheckpointError(f"Invalid checkpoint manifest {manifest_path}: {e}")

    if manifest.schema_id != CHECKPOINT_SCHEMA:
        raise CheckpointError(f"Unsupported checkpoint schema {manifest.schema_id!r}, expected {CHECKPOINT_SCHEMA!r}")
    return manifest


def load_checkpoint(directory: Union[str, Path], device: str = 'cpu') -> Checkpoint:
    '''
    Rebuild a model from a checkpoint directory.

    Args:
        directory (Union[str, Path]): Directory written by save_checkpoint.
        device (str): Device to load the parameters onto.

    Returns:
        Checkpoint: The checkpoint; its model is in eval mode.

    Raises:
        CheckpointError: If any part of the directory is missing or does not fit the model.
    '''
    root = Path(directory)
    manifest = read_manifest(root)

    try:
        vocabularies = CorpusStore(root).load_vocabularies()
    except VocabularyError as e:
        raise CheckpointError(f"Checkpoint {root} has unusable vocabularies: {e}")

    weights = root / CHECKPOINT_WEIGHTS
    if not weights.is_file():
        raise CheckpointError(f"Checkpoint weights not found: {weights}")

    model = JointExtractor(vocabularies, manifest.config)
    try:
        model.load_state_dict(torch.load(weights, map_location=device, weights_only=True))
    except (RuntimeError, OSError) as e:
        logger.error(f"Weights in {weights} do not fit the model: {e}")
        raise CheckpointError(f"Weights in {weights} do not fit the model: {e}")

    model.to(device)
    model.eval()
    logger.info(f"Loaded checkpoint from {root} (dev F1 {manifest.dev_f1:.4f})")
    return Checkpoint(model, vocabularies, manifest.config, manifest.dev_f1, manifest.global_step, manifest.epoch)
