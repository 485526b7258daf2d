import logging
from typing import Iterator, List, Sequence
from tqdm import tqdm
from ..models.sentence import AnnotatedSentence
from ..network.batching import SentenceBatch
from ..network.model import JointExtractor

# Configure logging
logger = logging.getLogger(__name__)


def iter_batches(model: JointExtractor, sentences: Sequence[AnnotatedSentence],
                 batch_size: int) -> Iterator[SentenceBatch]:
    ''' Consecutive id-tensor batches of the sentences, in corpus order '''
    for start in range(0, len(sentences), batch_size):
        chunk = sentences[start:start + batch_size]
        yield model.tensorize([s.sentence for s in chunk], ids=[s.id for s in chunk])


def predict_corpus(model: JointExtractor, sentences: Sequence[AnnotatedSentence], batch_size: int = 64,
                   progress: bool = False) -> List[AnnotatedSentence]:
    '''
    Extract the triplets of every sentence.

    Args:
        model (JointExtractor): The trained model.
        sentences (Sequence[AnnotatedSentence]): Input sentences; their triplets are ignored.
        batch_size (int): Sentences per inference batch.
        progress (bool): Show a progress bar.

    Returns:
        List[AnnotatedSentence]: One prediction per sentence with the same id and tokens,
            triplets without entity types.
    '''
    logger.info(f"Extracting triplets from {len(sentences)} sentences")
    predictions: List[AnnotatedSentence] = []
    batches = iter_batches(model, sentences, batch_size)
    total = (len(sentences) + batch_size - 1) // batch_size

    for batch in tqdm(batches, total=total, desc="extract", disable=not progress):
        for sentence_id, result in zip(batch.ids, model.extract_batch(batch)):
            source = sentences[len(predictions)]
            predictions.append(AnnotatedSentence(id=sentence_id, sentence=source.sentence, triplets=result.triplets))

    logger.info(f"Extracted {sum(len(p.triplets) for p in predictions)} triplets")
    return predictions
