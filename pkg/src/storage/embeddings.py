import logging
from pathlib import Path
from typing import Dict, Tuple, Union
import numpy as np
import torch
from ..models.vocabulary import LabelVocabulary
from ..utils.exceptions import IngestionError

# Configure logging
logger = logging.getLogger(__name__)


def load_pretrained_vectors(path: Union[str, Path], vocabulary: LabelVocabulary, dim: int,
                            seed: int = 0) -> Tuple[torch.Tensor, float]:
    '''
    Build the word embedding matrix from a GloVe-format text file.

    Each vocabulary entry takes the vector of the exact token if present, else of its lower-cased form.
    Entries without a vector are drawn from N(0, 0.1); the padding row (id 0) is zero.

    Args:
        path (Union[str, Path]): Whitespace-separated file, one token followed by dim floats per line.
        vocabulary (LabelVocabulary): The word vocabulary; <pad> and <unk> are its first two entries.
        dim (int): Expected vector size.
        seed (int): Seed of the random rows.

    Returns:
        Tuple[torch.Tensor, float]: The (len(vocabulary), dim) matrix and the share of regular
            entries that found a vector.

    Raises:
        IngestionError: If the file is missing or holds no vector of the expected size.
    '''
    file_path = Path(path)
    if not file_path.is_file():
        logger.error(f"Pretrained vector file not found: {file_path}")
        raise IngestionError(f"Pretrained vector file not found: {file_path}")

    wanted = set(vocabulary.labels) | {label.lower() for label in vocabulary.labels}
    vectors: Dict[str, np.ndarray] = {}
    skipped = 0
    valid = 0

    with open(file_path, 'r', encoding='utf-8') as f:
        for line_number, line in enumerate(f, start=1):
            parts = line.rstrip().split(' ')
            if len(parts) != dim + 1:
                skipped += 1
                continue
            valid += 1
            if parts[0] in wanted and parts[0] not in vectors:
                try:
                    vectors[parts[0]] = np.asarray(parts[1:], dtype=np.float32)
                except ValueError:
                    raise IngestionError(f"Non-numeric vector in {file_path}", line=line_number)

    if not valid:
        raise IngestionError(f"No {dim}-dimensional vectors found in {file_path}")
    if skipped:
        logger.warning(f"Skipped {skipped} line(s) of {file_path} without {dim} values")

    rng = np.random.default_rng(seed)
    matrix = rng.normal(0.0, 0.1, size=(len(vocabulary), dim)).astype(np.float32)
    matrix[0] = 0.0

    hits = 0
    for index, label in enumerate(vocabulary.labels[2:], start=2):
        vector = vectors.get(label)
        if vector is None:
            vector = vectors.get(label.lower())
        if vector is not None:
            matrix[index] = vector
            hits += 1

    regular = max(len(vocabulary) - 2, 1)
    hit_rate = hits / regular
    logger.info(f"Pretrained vectors cover {hits}/{len(vocabulary) - 2} tokens ({hit_rate:.1%})")
    return torch.from_numpy(matrix), hit_rate
