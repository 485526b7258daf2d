import logging
from pathlib import Path
from typing import Optional
import typer
from rich.table import Table
from .common import console, load_corpus, run_manifest
from ..models.sentence import AnnotatedSentence
from ..services.corpus import build_vocabularies, corpus_statistics
from ..services.tagset import encode_he, encode_ter, render_tagging
from ..storage.corpus_store import CorpusStore
from ..utils.constants import DATASET_FORMATS
from ..utils.exceptions import EncodingConflict, IngestionError

# Configure logging
logger = logging.getLogger(__name__)


def register_commands(app: typer.Typer) -> typer.Typer:
    """
    Add the corpus commands to the application.

    Returns:
        typer.Typer: The application.
    """
    app.command('prepare', help="Validate a dataset and write the native corpus with its vocabularies.")(prepare)
    app.command('inspect-tags', help="Show the boundary tags of one sentence.")(inspect_tags)
    return app


def count_conflicts(data, vocabularies) -> int:
    ''' Sentences whose HE or TER targets cannot be encoded '''
    conflicts = 0
    for s in data:
        try:
            encode_he(s, vocabularies.tags)
            for head in s.head_spans():
                encode_ter(s, head, vocabularies.tags)
        except EncodingConflict:
            conflicts += 1
    return conflicts


def prepare(
    input: Path = typer.Option(..., '--input', help="Dataset file"),
    out: Path = typer.Option(..., '--out', help="Prepared corpus directory"),
    format: str = typer.Option('native', '--format', help=f"One of {', '.join(DATASET_FORMATS)}"),
    min_token_freq: int = typer.Option(1, '--min-token-freq', min=1, help="Word frequency cutoff"),
    lowercase: bool = typer.Option(False, '--lowercase', help="Lower-case the word vocabulary"),
    strict: bool = typer.Option(False, '--strict', help="Fail on sentences the tagging scheme cannot encode"),
) -> None:
    ''' Validate a dataset and write the native corpus with its vocabularies '''
    with run_manifest('prepare', {'input': input}) as manifest:
        data, _ = load_corpus(input, format)
        vocabularies = build_vocabularies(data, min_token_freq, lowercase)

        conflicts = count_conflicts(data, vocabularies)
        if conflicts:
            message = f"{conflicts} sentence(s) hold overlapping boundaries the tagging scheme cannot encode"
            if strict:
                raise EncodingConflict(message)
            logger.warning(message)

        store = CorpusStore(out)
        manifest.artifacts = {
            'corpus': str(store.save_corpus(data)),
            'vocab': str(store.save_vocabularies(vocabularies)),
        }
        manifest.config = {'format': format, 'min_token_freq': min_token_freq, 'lowercase_tokens': lowercase}

        table = Table(title=f"Corpus statistics: {input}")
        table.add_column('statistic')
        table.add_column('value', justify='right')
        for key, value in {**corpus_statistics(data), 'encoding_conflicts': conflicts}.items():
            table.add_row(key, str(value))
        console.print(table)


def _find(data, index: Optional[int], sentence_id: Optional[str]) -> AnnotatedSentence:
    if sentence_id is not None:
        for s in data:
            if s.id == sentence_id:
                return s
        raise IngestionError(f"No sentence with id {sentence_id!r}")
    position = index or 0
    if not 0 <= position < len(data):
        raise IngestionError(f"Sentence index {position} is out of range for {len(data)} sentences")
    return data[position]


def _tag_table(title: str, rows) -> Table:
    table = Table(title=title, show_header=False)
    for _ in rows[0]:
        table.add_column(justify='center')
    for label, row in zip(('token', 'start', 'end'), rows):
        table.add_row(*row, style='bold' if label == 'token' else None)
    return table


def inspect_tags(
    input: Path = typer.Option(..., '--input', help="Dataset file or prepared corpus directory"),
    format: str = typer.Option('native', '--format', help=f"One of {', '.join(DATASET_FORMATS)}"),
    index: Optional[int] = typer.Option(None, '--index', help="0-based sentence position"),
    sentence_id: Optional[str] = typer.Option(None, '--sentence-id', '--id', help="Sentence id"),
) -> None:
    ''' Show the HE tags of one sentence and the TER tags of each of its heads '''
    with run_manifest('inspect-tags', {'input': input}):
        data, vocabularies = load_corpus(input, format)
        vocabularies = vocabularies or build_vocabularies(data)
        s = _find(data, index, sentence_id)
        tokens = s.sentence.tokens

        he = encode_he(s, vocabularies.tags)
        console.print(_tag_table(f"HE tags of sentence {s.id}",
                                 render_tagging(tokens, he, vocabularies.tags.entity_types)))
        for head in s.head_spans():
            ter = encode_ter(s, head, vocabularies.tags)
            head_text = ' '.join(tokens[head.start:head.end + 1])
            console.print(_tag_table(f"TER tags for head {head_text!r} {head.bounds}",
                                     render_tagging(tokens, ter, vocabularies.tags.relation_types)))
