from typing import Iterable, Optional


class ExtractionToolkitError(Exception):
    ''' Base class for every error raised by the toolkit '''
    category = 'error'


class IngestionError(ExtractionToolkitError):
    ''' A dataset record could not be parsed or failed validation '''
    category = 'ingestion'

    def __init__(self, message: str, line: Optional[int] = None, sentence_id: Optional[str] = None):
        self.line = line
        self.sentence_id = sentence_id
        where = []
        if line is not None:
            where.append(f'line {line}')
        if sentence_id is not None:
            where.append(f'sentence {sentence_id}')
        prefix = f"{', '.join(where)}: " if where else ''
        super().__init__(f'{prefix}{message}')


class EncodingConflict(ExtractionToolkitError):
    ''' Two targets share a boundary token and cannot be tagged together '''
    category = 'encoding'

    def __init__(self, message: str, offenders: Iterable = ()):
        self.offenders = list(offenders)
        super().__init__(f'{message}: {self.offenders}')


class VocabularyError(ExtractionToolkitError):
    category = 'vocabulary'


class CheckpointError(ExtractionToolkitError):
    category = 'checkpoint'


class AlignmentError(ExtractionToolkitError):
    ''' Gold and predicted corpora do not describe the same sentences '''
    category = 'alignment'


class EmptyCorpusError(ExtractionToolkitError):
    category = 'corpus'


class NonFiniteLossError(ExtractionToolkitError):
    category = 'training'

    def __init__(self, message: str, sentence_ids: Iterable[str] = ()):
        self.sentence_ids = list(sentence_ids)
        super().__init__(f'{message} (sentences: {self.sentence_ids})')
