import json
import logging
from pathlib import Path
from typing import Iterable, Iterator, List, Tuple, Union
from ..models.sentence import AnnotatedSentence
from ..models.vocabulary import CorpusVocabularies, LabelVocabulary, TagVocabulary
from ..utils.constants import CORPUS_FILENAME, PAD_TOKEN, UNK_TOKEN, VOCAB_FOLDER
from ..utils.exceptions import IngestionError, VocabularyError
from ..utils.file_utils import ensure_dir

# Configure logging
logger = logging.getLogger(__name__)

_VOCAB_FILES = {
    'tokens': 'tokens.txt',
    'chars': 'chars.txt',
    'pos': 'pos.txt',
    'entity_types': 'entity_types.txt',
    'relation_types': 'relation_types.txt',
}
_LOWERCASE_MARKER = 'lowercase_tokens'


def read_records(path: Union[str, Path]) -> Iterator[Tuple[int, dict]]:
    '''
    Iterate over the records of a dataset file.

    Line-delimited files yield one record per non-blank line; a file holding a single
    JSON array yields its elements. Line numbers are 1-based (array position + 1 for arrays).

    Args:
        path (Union[str, Path]): The dataset file.

    Yields:
        Tuple[int, dict]: Line number and parsed record.

    Raises:
        IngestionError: If the file is missing or a record is not valid JSON.
    '''
    file_path = Path(path)
    if not file_path.is_file():
        logger.error(f"Dataset file not found: {file_path}")
        raise IngestionError(f"Dataset file not found: {file_path}")

    with open(file_path, 'r', encoding='utf-8') as f:
        text = f.read()

    if text.lstrip().startswith('['):
        try:
            records = json.loads(text)
        except json.JSONDecodeError as e:
            raise IngestionError(f"Malformed JSON array: {e.msg}", line=e.lineno)
        for position, record in enumerate(records, start=1):
            yield position, record
        return

    for line_number, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            yield line_number, json.loads(line)
        except json.JSONDecodeError as e:
            logger.error(f"Malformed record at line {line_number} of {file_path}: {e.msg}")
            raise IngestionError(f"Malformed record: {e.msg}", line=line_number)


def write_sentences(path: Union[str, Path], sentences: Iterable[AnnotatedSentence]) -> int:
    '''
    Write sentences as native line-delimited records.

    Returns:
        int: The number of records written.
    '''
    file_path = Path(path)
    ensure_dir(file_path.parent)
    count = 0
    with open(file_path, 'w', encoding='utf-8') as f:
        for sentence in sentences:
            f.write(json.dumps(sentence.to_record(), ensure_ascii=False))
            f.write('\n')
            count += 1
    logger.info(f"Wrote {count} sentences to {file_path}")
    return count


class CorpusStore:
    """
    A prepared corpus directory: the native corpus file plus its vocabulary files.

    Attributes:
        root (Path): The directory.
        corpus_path (Path): The native line-delimited corpus.
        vocab_dir (Path): Directory with one vocabulary file per label space.
    """

    def __init__(self, root: Union[str, Path]):
        if not str(root):
            raise ValueError("Corpus directory is required")
        self.root = Path(root)
        self.corpus_path = self.root / CORPUS_FILENAME
        self.vocab_dir = self.root / VOCAB_FOLDER

    def has_vocabularies(self) -> bool:
        return all((self.vocab_dir / name).is_file() for name in _VOCAB_FILES.values())

    def save_corpus(self, sentences: List[AnnotatedSentence]) -> Path:
        ensure_dir(self.root)
        write_sentences(self.corpus_path, sentences)
        return self.corpus_path

    def save_vocabularies(self, vocabularies: CorpusVocabularies) -> Path:
        '''
        Write one label per line; the id of a label is its 0-based line number.

        Returns:
            Path: The vocabulary directory.
        '''
        ensure_dir(self.vocab_dir)
        tables = {
            'tokens': vocabularies.tokens.labels,
            'chars': vocabularies.chars.labels,
            'pos': vocabularies.pos.labels,
            'entity_types': vocabularies.tags.entity_types.labels,
            'relation_types': vocabularies.tags.relation_types.labels,
        }
        for key, labels in tables.items():
            if any('\n' in label for label in labels):
                raise VocabularyError(f"{key} vocabulary holds a label with a line break")
            (self.vocab_dir / _VOCAB_FILES[key]).write_text('\n'.join(labels) + '\n', encoding='utf-8')

        marker = self.vocab_dir / _LOWERCASE_MARKER
        if vocabularies.lowercase_tokens:
            marker.touch()
        elif marker.exists():
            marker.unlink()

        logger.info(f"Saved vocabularies to {self.vocab_dir}")
        return self.vocab_dir

    def load_vocabularies(self) -> CorpusVocabularies:
        '''
        Read the vocabulary files written by save_vocabularies.

        Raises:
            VocabularyError: If a file is missing or malformed.
        '''
        tables = {}
        for key, name in _VOCAB_FILES.items():
            file_path = self.vocab_dir / name
            if not file_path.is_file():
                logger.error(f"Missing vocabulary file: {file_path}")
                raise VocabularyError(f"Missing vocabulary file: {file_path}")
            tables[key] = file_path.read_text(encoding='utf-8').split('\n')[:-1]

        try:
            vocabularies = CorpusVocabularies(
                tokens=LabelVocabulary(labels=tables['tokens'], unknown=UNK_TOKEN),
                chars=LabelVocabulary(labels=tables['chars'], unknown=UNK_TOKEN),
                pos=LabelVocabulary(labels=tables['pos'], unknown=UNK_TOKEN),
                tags=TagVocabulary(
                    entity_types=LabelVocabulary(labels=tables['entity_types']),
                    relation_types=LabelVocabulary(labels=tables['relation_types']),
                ),
                lowercase_tokens=(self.vocab_dir / _LOWERCASE_MARKER).exists(),
            )
        except ValueError as e:
            logger.error(f"Invalid vocabulary files in {self.vocab_dir}: {e}")
            raise VocabularyError(f"Invalid vocabulary files in {self.vocab_dir}: {e}")

        for key in ('tokens', 'chars', 'pos'):
            if tables[key][:2] != [PAD_TOKEN, UNK_TOKEN]:
                raise VocabularyError(f"{key} vocabulary must start with {PAD_TOKEN} and {UNK_TOKEN}")

        logger.info(f"Loaded vocabularies from {self.vocab_dir}")
        return vocabularies
