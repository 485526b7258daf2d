import logging
import time
from collections import defaultdict
from typing import Callable, Dict, List, Optional, Sequence, Set, Tuple
from .corpus import categorize_sentence, triplet_count_bucket
from .extraction import iter_batches
from ..models.report import ScoreReport
from ..models.sentence import AnnotatedSentence
from ..network.model import JointExtractor
from ..utils.exceptions import AlignmentError, EmptyCorpusError

# Configure logging
logger = logging.getLogger(__name__)

TripletKey = Tuple[int, int, str, int, int]
BREAKDOWNS = ('category', 'count')


def _index(sentences: Sequence[AnnotatedSentence], role: str) -> Dict[Optional[str], AnnotatedSentence]:
    indexed: Dict[Optional[str], AnnotatedSentence] = {}
    for s in sentences:
        if s.id in indexed:
            raise AlignmentError(f"Duplicate sentence id {s.id!r} in {role} corpus")
        indexed[s.id] = s
    return indexed


def align(gold: Sequence[AnnotatedSentence], pred: Sequence[AnnotatedSentence]) -> List[Tuple[AnnotatedSentence, AnnotatedSentence]]:
    '''
    Pair every gold sentence with the prediction carrying the same id.

    Raises:
        AlignmentError: If ids are duplicated or the two corpora hold different ids.
    '''
    gold_index, pred_index = _index(gold, 'gold'), _index(pred, 'predicted')
    missing = [i for i in gold_index if i not in pred_index]
    extra = [i for i in pred_index if i not in gold_index]
    if missing or extra:
        logger.error(f"Misaligned corpora: {len(missing)} gold id(s) without prediction, {len(extra)} unknown id(s)")
        raise AlignmentError(f"Misaligned corpora: missing predictions for {missing[:5]}, unknown ids {extra[:5]}")
    return [(g, pred_index[g.id]) for g in gold]


def _sentence_report(g: AnnotatedSentence, p: AnnotatedSentence) -> ScoreReport:
    gold_keys: Set[TripletKey] = {t.key() for t in g.triplets}
    pred_keys: Set[TripletKey] = {t.key() for t in p.triplets}
    return ScoreReport(gold=len(gold_keys), predicted=len(pred_keys), correct=len(gold_keys & pred_keys))


def _count(pairs: Sequence[Tuple[AnnotatedSentence, AnnotatedSentence]]) -> ScoreReport:
    return sum((_sentence_report(g, p) for g, p in pairs), ScoreReport())


def score(gold: Sequence[AnnotatedSentence], pred: Sequence[AnnotatedSentence]) -> ScoreReport:
    '''
    Exact-match micro precision, recall and F1.

    A predicted triplet is correct when the same sentence's gold set holds the same head span,
    relation and tail span. Entity types are ignored and duplicate predictions count once.

    Args:
        gold (Sequence[AnnotatedSentence]): Gold sentences.
        pred (Sequence[AnnotatedSentence]): Predictions, matched to gold by sentence id.

    Returns:
        ScoreReport: Counts and scores over all sentences.

    Raises:
        AlignmentError: If the two corpora do not hold the same sentence ids.
    '''
    return _count(align(gold, pred))


def _score_partitioned(gold, pred, key: Callable[[AnnotatedSentence], str]) -> Dict[str, ScoreReport]:
    partitions: Dict[str, list] = defaultdict(list)
    for g, p in align(gold, pred):
        if g.triplets:
            partitions[key(g)].append((g, p))
    return {name: _count(pairs) for name, pairs in sorted(partitions.items())}


def score_by_category(gold: Sequence[AnnotatedSentence], pred: Sequence[AnnotatedSentence]) -> Dict[str, ScoreReport]:
    ''' Scores per overlap category of the gold sentence; sentences without gold triplets are left out '''
    return _score_partitioned(gold, pred, lambda s: categorize_sentence(s).value)


def score_by_count(gold: Sequence[AnnotatedSentence], pred: Sequence[AnnotatedSentence]) -> Dict[str, ScoreReport]:
    ''' Scores per gold triplet-count bucket; sentences without gold triplets are left out '''
    return _score_partitioned(gold, pred, lambda s: triplet_count_bucket(s).value)


def evaluate(gold: Sequence[AnnotatedSentence], pred: Sequence[AnnotatedSentence],
             by: Optional[str] = None) -> ScoreReport:
    '''
    Overall scores, with a breakdown attached when requested.

    Args:
        by (Optional[str]): "category", "count" or None.

    Raises:
        ValueError: If by is not a known breakdown.
    '''
    report = score(gold, pred)
    if by is None:
        return report
    if by not in BREAKDOWNS:
        raise ValueError(f"Unknown breakdown {by!r}; expected one of {BREAKDOWNS}")

    breakdown = score_by_category(gold, pred) if by == 'category' else score_by_count(gold, pred)
    covered = sum(breakdown.values(), ScoreReport())
    # Partitions hold every gold triplet; only predictions on sentences without gold fall outside
    outside = report.predicted - covered.predicted
    if outside:
        logger.info(f"{outside} predicted triplet(s) on sentences without gold triplets are outside the {by} breakdown")
    return report.model_copy(update={'breakdown': breakdown})


def measure_throughput(model: JointExtractor, corpus: Sequence[AnnotatedSentence], batch_size: int = 64,
                       epochs: int = 3, warmup: int = 1) -> float:
    '''
    Inference batches processed per second.

    Batches are tensorized ahead of timing; each timed epoch runs extraction over all of them
    and the result is the mean rate over the epochs.

    Args:
        model (JointExtractor): The model to time.
        corpus (Sequence[AnnotatedSentence]): Sentences to extract from.
        batch_size (int): Sentences per batch.
        epochs (int): Timed passes over the corpus, at least 3 are used.
        warmup (int): Untimed batches run before timing.

    Returns:
        float: Mean batches per second.

    Raises:
        EmptyCorpusError: If the corpus is empty.
    '''
    if not corpus:
        logger.error("Cannot measure throughput on an empty corpus")
        raise EmptyCorpusError("Cannot measure throughput on an empty corpus")

    batches = list(iter_batches(model, corpus, batch_size))
    model.eval()

    for batch in batches[:warmup]:
        model.extract_batch(batch)

    rates: List[float] = []
    for _ in range(max(epochs, 3)):
        start = time.perf_counter()
        for batch in batches:
            model.extract_batch(batch)
        elapsed = max(time.perf_counter() - start, 1e-9)
        rates.append(len(batches) / elapsed)

    mean = sum(rates) / len(rates)
    logger.info(f"Throughput: {mean:.2f} batches/s over {len(rates)} epochs of {len(batches)} batches")
    return mean
