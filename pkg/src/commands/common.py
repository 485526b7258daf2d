import logging
import time
from contextlib import contextmanager
from datetime import datetime, timezone
from pathlib import Path
from typing import Dict, Iterator, List, Optional, Sequence, Tuple
from dotenv import dotenv_values
from pydantic import ValidationError
from rich.console import Console
from rich.table import Table
from ..models.config import TrainConfig
from ..models.manifest import RunManifest
from ..models.report import ScoreReport
from ..models.sentence import AnnotatedSentence
from ..models.vocabulary import CorpusVocabularies
from ..services.corpus import load_dataset
from ..storage.corpus_store import CorpusStore
from ..utils.config import RUNS_DIR, get_train_settings
from ..utils.constants import CHECKPOINT_WEIGHTS
from ..utils.exceptions import IngestionError
from ..utils.file_utils import ensure_dir, fingerprint

# Configure logging
logger = logging.getLogger(__name__)

console = Console()


def load_corpus(path: Path, format: str = 'native') -> Tuple[List[AnnotatedSentence], Optional[CorpusVocabularies]]:
    '''
    Load a corpus file, or a prepared corpus directory together with its vocabularies.

    Returns:
        Tuple[List[AnnotatedSentence], Optional[CorpusVocabularies]]: The sentences and, for a
            prepared directory, its vocabularies.
    '''
    if path.is_dir():
        store = CorpusStore(path)
        vocabularies = store.load_vocabularies() if store.has_vocabularies() else None
        return load_dataset(store.corpus_path), vocabularies
    return load_dataset(path, format), None


def input_file(path: Path) -> Path:
    ''' The file a path argument refers to, for fingerprinting: checkpoint weights or the corpus file '''
    if not path.is_dir():
        return path
    weights = path / CHECKPOINT_WEIGHTS
    return weights if weights.is_file() else CorpusStore(path).corpus_path


def load_train_config(path: Optional[Path], **overrides) -> TrainConfig:
    '''
    Environment defaults, then the flat KEY=value file, then explicit overrides.

    Raises:
        IngestionError: If the file is missing or holds an unknown key or an invalid value.
    '''
    values: Dict[str, Optional[str]] = {k: str(v) for k, v in get_train_settings().items() if k != 'device'}
    if path is not None:
        if not path.is_file():
            raise IngestionError(f"Config file not found: {path}")
        values.update(dotenv_values(path))

    try:
        return TrainConfig.from_flat(values, **{k: v for k, v in overrides.items() if v is not None})
    except (ValueError, ValidationError) as e:
        logger.error(f"Invalid config {path}: {e}")
        raise IngestionError(f"Invalid config {path}: {e}")


@contextmanager
def run_manifest(subcommand: str, inputs: Dict[str, Path], runs_dir: Optional[str] = None) -> Iterator[RunManifest]:
    '''
    Record one invocation. The manifest is written when the block exits, also on failure.

    Yields:
        RunManifest: The manifest; callers fill in config, seed and artifacts.
    '''
    manifest = RunManifest(
        subcommand=subcommand,
        fingerprints={name: fingerprint(input_file(path)) for name, path in inputs.items()},
    )
    start = time.perf_counter()
    try:
        yield manifest
    finally:
        manifest.duration_seconds = time.perf_counter() - start
        directory = ensure_dir(runs_dir or RUNS_DIR)
        stamp = datetime.now(timezone.utc).strftime('%Y%m%dT%H%M%S%f')
        target = directory / f"{subcommand}-{stamp}.json"
        target.write_text(manifest.model_dump_json(indent=2), encoding='utf-8')
        logger.debug(f"Wrote run manifest {target}")


def report_table(report: ScoreReport, title: str) -> Table:
    ''' Aligned human-readable view of a score report and its breakdown '''
    table = Table(title=title)
    for column in ('scope', 'precision', 'recall', 'f1', 'gold', 'predicted', 'correct'):
        table.add_column(column, justify='left' if column == 'scope' else 'right')

    rows: Sequence[Tuple[str, ScoreReport]] = [('all', report), *(report.breakdown or {}).items()]
    for scope, entry in rows:
        table.add_row(scope, f"{entry.precision:.3f}", f"{entry.recall:.3f}", f"{entry.f1:.3f}",
                      str(entry.gold), str(entry.predicted), str(entry.correct))
    return table
