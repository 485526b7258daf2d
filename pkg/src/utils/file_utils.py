import hashlib
import random
from pathlib import Path
from typing import Optional, Union

import numpy as np
import torch

_CHUNK_SIZE = 1 << 20


def fingerprint(path: Union[str, Path]) -> Optional[str]:
    '''
    Compute the content hash of a file.

    Args:
        path (Union[str, Path]): Path to the file.

    Returns:
        Optional[str]: The hex SHA-256 digest of the file bytes, or None if the path is not a file.
    '''
    file_path = Path(path)
    if not file_path.is_file():
        return None

    digest = hashlib.sha256()
    with open(file_path, 'rb') as f:
        for chunk in iter(lambda: f.read(_CHUNK_SIZE), b''):
            digest.update(chunk)
    return digest.hexdigest()


def ensure_dir(path: Union[str, Path]) -> Path:
    ''' Create the directory (and parents) if needed and return it as a Path '''
    directory = Path(path)
    directory.mkdir(parents=True, exist_ok=True)
    return directory


def seed_everything(seed: int) -> None:
    '''
    Seed every random number generator used by the toolkit.

    Args:
        seed (int): The seed shared by python, numpy and torch.
    '''
    random.seed(seed)
    np.random.seed(seed)
    torch.manual_seed(seed)
