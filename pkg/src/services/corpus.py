import logging
from collections import Counter
from itertools import combinations
from pathlib import Path
from typing import Dict, List, Tuple, Union
from pydantic import ValidationError
from .adapters import ADAPTERS
from ..models.sentence import AnnotatedSentence, CountBucket, SentenceCategory, Triplet
from ..models.vocabulary import CorpusVocabularies, LabelVocabulary, TagVocabulary
from ..storage.corpus_store import read_records, write_sentences
from ..utils.constants import DEFAULT_ENTITY_TYPE
from ..utils.exceptions import EmptyCorpusError, IngestionError

# Configure logging
logger = logging.getLogger(__name__)


def load_dataset(path: Union[str, Path], format: str = 'native') -> List[AnnotatedSentence]:
    '''
    Load and validate a dataset file.

    Args:
        path (Union[str, Path]): The dataset file.
        format (str): One of "native", "nyt" or "webnlg".

    Returns:
        List[AnnotatedSentence]: Validated sentences. Records without an id get their 0-based position.

    Raises:
        IngestionError: If the format is unknown, a record is malformed, or a span is out of range.
    '''
    adapter = ADAPTERS.get(format)
    if adapter is None:
        raise IngestionError(f"Unknown dataset format {format!r}; expected one of {sorted(ADAPTERS)}")

    logger.info(f"Loading {format} dataset from {path}")
    sentences: List[AnnotatedSentence] = []
    duplicates = 0

    for line, record in read_records(path):
        sentence_id = None
        try:
            converted = adapter(record)
            sentence_id = str(converted.get('id', len(sentences)))
            triplets = [Triplet.model_validate(t) for t in converted.get('triplets', [])]
        except (KeyError, TypeError, ValueError) as e:
            logger.error(f"Malformed record at line {line}: {e}")
            raise IngestionError(f"Malformed record: {e}", line=line, sentence_id=sentence_id)

        # First occurrence wins; entity types do not make a triplet distinct
        first: Dict[Tuple[int, int, str, int, int], Triplet] = {}
        for triplet in triplets:
            first.setdefault(triplet.key(), triplet)
        unique = list(first.values())
        duplicates += len(triplets) - len(unique)

        try:
            sentences.append(AnnotatedSentence(
                id=sentence_id,
                sentence={'tokens': converted['tokens'], 'pos': converted['pos']},
                triplets=unique,
            ))
        except ValidationError as e:
            logger.error(f"Invalid sentence {sentence_id} at line {line}: {e}")
            raise IngestionError(f"Invalid sentence: {e}", line=line, sentence_id=sentence_id)

    if duplicates:
        logger.warning(f"Dropped {duplicates} duplicate triplet(s) while loading {path}")

    logger.info(f"Loaded {len(sentences)} sentences from {path}")
    return sentences


def save_dataset(path: Union[str, Path], sentences: List[AnnotatedSentence]) -> int:
    ''' Write sentences in the native schema; load_dataset reads them back unchanged '''
    return write_sentences(path, sentences)


def build_vocabularies(data: List[AnnotatedSentence], min_token_freq: int = 1,
                       lowercase_tokens: bool = False) -> CorpusVocabularies:
    '''
    Register every token, character, POS tag, entity type and relation type of the data.

    Args:
        data (List[AnnotatedSentence]): The training sentences.
        min_token_freq (int): Tokens seen fewer times map to the unknown entry.
        lowercase_tokens (bool): Lower-case tokens before counting them.

    Returns:
        CorpusVocabularies: The vocabularies; "O" is id 0 in both tag spaces.

    Raises:
        EmptyCorpusError: If data is empty.
    '''
    if not data:
        logger.error("Cannot build vocabularies from an empty corpus")
        raise EmptyCorpusError("Cannot build vocabularies from an empty corpus")

    tokens, chars, pos = Counter(), Counter(), Counter()
    entity_types, relation_types = set(), set()

    for s in data:
        for token in s.sentence.tokens:
            tokens[token.lower() if lowercase_tokens else token] += 1
            chars.update(token)
        pos.update(s.sentence.pos_tags)
        for t in s.triplets:
            entity_types.update(span.entity_type or DEFAULT_ENTITY_TYPE for span in (t.head, t.tail))
            relation_types.add(t.relation)

    vocabularies = CorpusVocabularies(
        tokens=LabelVocabulary.from_counts(tokens, min_freq=min_token_freq),
        chars=LabelVocabulary.from_counts(chars),
        pos=LabelVocabulary.from_counts(pos),
        tags=TagVocabulary.from_labels(entity_types, relation_types),
        lowercase_tokens=lowercase_tokens,
    )
    logger.info(
        f"Built vocabularies: {len(vocabularies.tokens)} tokens, {len(vocabularies.chars)} chars, "
        f"{len(vocabularies.pos)} POS tags, {len(entity_types)} entity types, {len(relation_types)} relation types"
    )
    return vocabularies


def categorize_sentence(s: AnnotatedSentence) -> SentenceCategory:
    '''
    Overlap category of a sentence. Entities are identified by their exact offsets.

    EPO: two triplets with the same unordered entity pair and different relations.
    SEO: otherwise, two triplets sharing at least one entity.
    Normal: neither.

    Raises:
        ValueError: If the sentence has no triplets.
    '''
    if not s.triplets:
        raise ValueError(f"Sentence {s.id} has no triplets; its category is undefined")

    pairs = [(frozenset((t.head.bounds, t.tail.bounds)), t.relation) for t in s.triplets]
    if any(p1 == p2 and r1 != r2 for (p1, r1), (p2, r2) in combinations(pairs, 2)):
        return SentenceCategory.EPO

    mentions = Counter(entity for pair, _ in pairs for entity in pair)
    if any(count > 1 for count in mentions.values()):
        return SentenceCategory.SEO

    return SentenceCategory.NORMAL


def triplet_count_bucket(s: AnnotatedSentence) -> CountBucket:
    '''
    Bucket of a sentence by its number of triplets, capped at "≥5".

    Raises:
        ValueError: If the sentence has no triplets.
    '''
    count = len(s.triplets)
    if count == 0:
        raise ValueError(f"Sentence {s.id} has no triplets; its bucket is undefined")
    return list(CountBucket)[min(count, 5) - 1]


def corpus_statistics(data: List[AnnotatedSentence]) -> Dict[str, int]:
    ''' Sentence, triplet and relation-type counts plus the overlap-category distribution '''
    categories = Counter(categorize_sentence(s).value for s in data if s.triplets)
    return {
        'sentences': len(data),
        'triplets': sum(len(s.triplets) for s in data),
        'relation_types': len({t.relation for s in data for t in s.triplets}),
        'empty_sentences': sum(1 for s in data if not s.triplets),
        **{category.value: categories.get(category.value, 0) for category in SentenceCategory},
    }
