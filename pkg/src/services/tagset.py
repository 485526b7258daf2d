import logging
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple
from ..models.sentence import AnnotatedSentence, EntitySpan
from ..models.tagging import BoundaryTagging, StartDistanceSequence, TagSpace, TypedSpan
from ..models.vocabulary import LabelVocabulary, TagVocabulary
from ..utils.constants import BINARY_ENTITY_LABEL, DEFAULT_ENTITY_TYPE
from ..utils.exceptions import EncodingConflict, VocabularyError

# Configure logging
logger = logging.getLogger(__name__)

OUTSIDE_ID = 0


def _label_id(vocabulary: LabelVocabulary, label: str) -> int:
    try:
        return vocabulary.id(label)
    except KeyError:
        raise VocabularyError(f"Label {label!r} is not in the tag vocabulary")


def _encode_spans(n: int, spans: Iterable[TypedSpan], tag_space: TagSpace) -> BoundaryTagging:
    '''
    Place each span's label on its start and end token.

    Raises:
        EncodingConflict: If two distinct spans share a start token or an end token.
    '''
    start_tags = [OUTSIDE_ID] * n
    end_tags = [OUTSIDE_ID] * n
    start_owner: Dict[int, TypedSpan] = {}
    end_owner: Dict[int, TypedSpan] = {}
    conflicts: List[Tuple[TypedSpan, TypedSpan]] = []

    for span in spans:
        for owner, index in ((start_owner, span.start), (end_owner, span.end)):
            previous = owner.get(index)
            if previous is not None and previous != span:
                conflicts.append((previous, span))
            owner.setdefault(index, span)
        start_tags[span.start] = start_owner[span.start].label
        end_tags[span.end] = end_owner[span.end].label

    if conflicts:
        raise EncodingConflict(f"{len(conflicts)} {tag_space.value} span pair(s) share a boundary token", conflicts)

    return BoundaryTagging(start_tags=start_tags, end_tags=end_tags, tag_space=tag_space)


def encode_he(s: AnnotatedSentence, vocabulary: TagVocabulary, binary_types: bool = False) -> BoundaryTagging:
    '''
    Tag the start and end token of every distinct head entity with its entity type.

    Args:
        s (AnnotatedSentence): The annotated sentence.
        vocabulary (TagVocabulary): Tag spaces; entity types are read from it.
        binary_types (bool): Tag every head as ENTITY instead of its type.

    Returns:
        BoundaryTagging: Tags in the entity tag space; all "O" when there are no triplets.

    Raises:
        EncodingConflict: If two head entities share a start or an end token.
    '''
    spans = []
    for head in s.head_spans():
        label = BINARY_ENTITY_LABEL if binary_types else (head.entity_type or DEFAULT_ENTITY_TYPE)
        span = TypedSpan(head.start, head.end, _label_id(vocabulary.entity_types, label))
        if span not in spans:
            spans.append(span)

    try:
        return _encode_spans(s.n, spans, TagSpace.ENTITY)
    except EncodingConflict as e:
        logger.debug(f"Head entities of sentence {s.id} cannot be encoded: {e}")
        raise


def encode_ter(s: AnnotatedSentence, head: EntitySpan, vocabulary: TagVocabulary) -> BoundaryTagging:
    '''
    Tag the tail entities of one head with the relation linking them to it.

    Args:
        s (AnnotatedSentence): The annotated sentence.
        head (EntitySpan): The conditioning head; matched on its offsets.
        vocabulary (TagVocabulary): Tag spaces; relation types are read from it.

    Returns:
        BoundaryTagging: Tags in the relation tag space; all "O" for a head without triplets.

    Raises:
        EncodingConflict: If two tails of this head share a start or an end token,
            which includes every entity-pair overlap.
    '''
    spans = [
        TypedSpan(t.tail.start, t.tail.end, _label_id(vocabulary.relation_types, t.relation))
        for t in s.triplets if t.head.bounds == head.bounds
    ]

    try:
        return _encode_spans(s.n, spans, TagSpace.RELATION)
    except EncodingConflict as e:
        logger.debug(f"Tails of head {head.bounds} in sentence {s.id} cannot be encoded: {e}")
        raise


def start_distances(start_tags: Sequence[int], C: int) -> StartDistanceSequence:
    '''
    Distance from every token to the nearest start tag at or before it.

    Args:
        start_tags (Sequence[int]): Start tag ids; 0 is "O".
        C (int): Value for tokens with no start before them. Should be at least the sentence length.

    Returns:
        StartDistanceSequence: 0 at every start, C before the first start.
    '''
    values: List[int] = []
    nearest: Optional[int] = None
    for index, tag in enumerate(start_tags):
        if tag != OUTSIDE_ID:
            nearest = index
        values.append(C if nearest is None else index - nearest)
    return StartDistanceSequence(values=values, C=C)


def decode_tags(start_tags: Sequence[int], end_tags: Sequence[int]) -> Tuple[Set[TypedSpan], int]:
    '''
    Multi-span decoding over raw tag-id sequences.

    Every labeled start is paired with the first end at or after it carrying the same label.

    Returns:
        Tuple[Set[TypedSpan], int]: The decoded spans and the number of starts left unmatched.
    '''
    spans: Set[TypedSpan] = set()
    dropped = 0
    n = len(start_tags)
    for i in range(n):
        label = start_tags[i]
        if label == OUTSIDE_ID:
            continue
        for j in range(i, n):
            if end_tags[j] == label:
                spans.add(TypedSpan(i, j, label))
                break
        else:
            dropped += 1
    return spans, dropped


def decode_with_stats(tagging: BoundaryTagging) -> Tuple[Set[TypedSpan], int]:
    ''' Decode a tagging and report how many starts found no matching end '''
    spans, dropped = decode_tags(tagging.start_tags, tagging.end_tags)
    if dropped:
        logger.debug(f"Dropped {dropped} unmatched {tagging.tag_space.value} start(s)")
    return spans, dropped


def decode(tagging: BoundaryTagging) -> Set[TypedSpan]:
    ''' Decode a tagging into typed spans '''
    return decode_with_stats(tagging)[0]


def render_tagging(tokens: Sequence[str], tagging: BoundaryTagging, labels: LabelVocabulary) -> List[List[str]]:
    '''
    Human-readable view of a tagging: the token row followed by the start and end tag rows.
    '''
    return [
        list(tokens),
        [labels.label(tag) for tag in tagging.start_tags],
        [labels.label(tag) for tag in tagging.end_tags],
    ]
