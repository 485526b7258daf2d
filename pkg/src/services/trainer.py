import copy
import logging
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union
import numpy as np
import torch
from torch.nn.utils import clip_grad_norm_
from tqdm import tqdm
from .corpus import build_vocabularies
from .evaluator import score
from .extraction import iter_batches, predict_corpus
from .tagset import OUTSIDE_ID, encode_he, encode_ter, start_distances
from ..models.config import TrainConfig
from ..models.sentence import AnnotatedSentence, EntitySpan
from ..models.tagging import BoundaryTagging, StartDistanceSequence, TagSpace
from ..models.vocabulary import CorpusVocabularies, TagVocabulary
from ..network.batching import TrainingBatch, stack_targets, tensorize
from ..network.model import JointExtractor
from ..storage.checkpoint_store import Checkpoint, save_checkpoint
from ..storage.embeddings import load_pretrained_vectors
from ..utils.exceptions import EmptyCorpusError, EncodingConflict, IngestionError, NonFiniteLossError
from ..utils.file_utils import seed_everything

# Configure logging
logger = logging.getLogger(__name__)


@dataclass
class TailTarget:
    ''' TER targets conditioned on one head '''
    head: EntitySpan
    tagging: BoundaryTagging
    distances: StartDistanceSequence


@dataclass
class TrainingInstance:
    ''' HE targets of a sentence and the TER targets of its conditioning heads '''
    sentence: AnnotatedSentence
    he_tagging: BoundaryTagging
    he_distances: StartDistanceSequence
    tails: List[TailTarget] = field(default_factory=list)


def make_training_instance(s: AnnotatedSentence, vocabulary: TagVocabulary, rng: random.Random, C: int,
                           binary_types: bool = False, repeat_heads: bool = False) -> List[TrainingInstance]:
    '''
    Training targets of one sentence.

    One gold head is drawn uniformly to condition the TER targets. With repeat_heads the
    sentence instead yields one instance per gold head. A sentence without triplets yields
    all-"O" HE targets and no TER targets.

    Args:
        s (AnnotatedSentence): The annotated sentence.
        vocabulary (TagVocabulary): Tag spaces of the model.
        rng (random.Random): Source of the head draw.
        C (int): Distance sentinel.
        binary_types (bool): Tag heads as ENTITY.
        repeat_heads (bool): One instance per gold head.

    Returns:
        List[TrainingInstance]: The instances.

    Raises:
        EncodingConflict: If the HE targets, or the TER targets of a used head, cannot be encoded.
    '''
    he_tagging = encode_he(s, vocabulary, binary_types=binary_types)
    he_distances = start_distances(he_tagging.start_tags, C)

    heads = s.head_spans()
    if not heads:
        return [TrainingInstance(s, he_tagging, he_distances)]

    chosen = heads if repeat_heads else [rng.choice(heads)]
    instances = []
    for head in chosen:
        tagging = encode_ter(s, head, vocabulary)
        tail = TailTarget(head, tagging, start_distances(tagging.start_tags, C))
        instances.append(TrainingInstance(s, he_tagging, he_distances, [tail]))
    return instances


def build_instances(data: Sequence[AnnotatedSentence], vocabulary: TagVocabulary, rng: random.Random,
                    config: TrainConfig) -> List[TrainingInstance]:
    ''' Instances of every sentence; sentences whose targets conflict are skipped and counted '''
    instances: List[TrainingInstance] = []
    skipped = 0
    for s in data:
        try:
            instances.extend(make_training_instance(
                s, vocabulary, rng, config.max_sentence_length,
                binary_types=config.binary_head_types, repeat_heads=config.repeat_heads,
            ))
        except EncodingConflict:
            skipped += 1
    if skipped:
        logger.warning(f"Skipped {skipped} sentence(s) with conflicting boundary tags")
    return instances


def add_negative_heads(model: JointExtractor, instances: List[TrainingInstance], batch_size: int) -> int:
    '''
    Condition TER on predicted heads that are not gold heads, with all-"O" targets.

    Returns:
        int: The number of negative heads added.
    '''
    first: Dict[int, TrainingInstance] = {}
    for instance in instances:
        first.setdefault(id(instance.sentence), instance)
    targets = list(first.values())
    sentences = [instance.sentence for instance in targets]

    C = model.config.max_sentence_length
    added = 0
    cursor = 0
    for batch in iter_batches(model, sentences, batch_size):
        for result in model.extract_batch(batch):
            instance = targets[cursor]
            cursor += 1
            gold = {head.bounds for head in instance.sentence.head_spans()}
            n = instance.sentence.n
            for extraction in result.heads:
                if extraction.head.bounds in gold:
                    continue
                tagging = BoundaryTagging(start_tags=[OUTSIDE_ID] * n, end_tags=[OUTSIDE_ID] * n,
                                          tag_space=TagSpace.RELATION)
                instance.tails.append(TailTarget(EntitySpan(start=extraction.head.start, end=extraction.head.end),
                                                 tagging, start_distances(tagging.start_tags, C)))
                added += 1
    return added


def collate(instances: Sequence[TrainingInstance], vocabularies: CorpusVocabularies, min_chars: int) -> TrainingBatch:
    ''' Stack instances into one batch; every tail target becomes one TER row '''
    sentences = tensorize([i.sentence.sentence for i in instances], vocabularies, min_chars=min_chars,
                          ids=[i.sentence.id for i in instances])
    max_len = sentences.word_ids.size(1)
    he_targets = stack_targets([i.he_tagging for i in instances], [i.he_distances for i in instances], max_len)

    rows = [b for b, instance in enumerate(instances) for _ in instance.tails]
    tails = [tail for instance in instances for tail in instance.tails]
    ter_targets = None
    if tails:
        ter_targets = stack_targets([t.tagging for t in tails], [t.distances for t in tails], max_len)

    return TrainingBatch(
        sentences=sentences,
        he_targets=he_targets,
        ter_rows=torch.tensor(rows, dtype=torch.long),
        ter_heads=torch.tensor([t.head.bounds for t in tails], dtype=torch.long).view(-1, 2),
        ter_targets=ter_targets,
    )


class Trainer:
    """
    Optimizer loop for a JointExtractor.

    Attributes:
        model (JointExtractor): The model being trained.
        config (TrainConfig): Optimization settings.
        global_step (int): Optimizer updates applied so far.
    """

    def __init__(self, model: JointExtractor, config: TrainConfig, device: str = 'cpu'):
        self.model = model.to(device)
        self.config = config
        self.device = device
        self.parameters = [p for p in model.parameters() if p.requires_grad]
        self.optimizer = torch.optim.Adam(self.parameters, lr=config.learning_rate)
        self.global_step = 0

    def train_step(self, batch: TrainingBatch) -> Tuple[float, float, float]:
        '''
        One update on L = L_HE + L_TER with global gradient-norm clipping.

        Returns:
            Tuple[float, float, float]: L, L_HE and L_TER before the update.

        Raises:
            NonFiniteLossError: If the loss is NaN or infinite; no update is applied.
        '''
        self.model.train()
        self.optimizer.zero_grad()
        loss = self.model(batch.to(self.device))

        if not torch.isfinite(loss.total):
            offending = (~torch.isfinite(loss.per_sentence)).nonzero().flatten().tolist()
            ids = [batch.sentences.ids[i] for i in offending] or list(batch.sentences.ids)
            logger.error(f"Non-finite loss at step {self.global_step}: sentences {ids}")
            raise NonFiniteLossError(f"Non-finite loss at step {self.global_step}", ids)

        loss.total.backward()
        clip_grad_norm_(self.parameters, self.config.grad_clip_norm)
        self.optimizer.step()
        self.global_step += 1
        return loss.total.item(), loss.head.item(), loss.tail.item()

    def train_epoch(self, instances: List[TrainingInstance], rng: random.Random, epoch: int = 0) -> float:
        ''' Shuffle, batch and train on every instance once; returns the mean batch loss '''
        order = list(instances)
        rng.shuffle(order)
        size = self.config.batch_size
        losses: List[float] = []

        batches = range(0, len(order), size)
        for start in tqdm(batches, desc=f"epoch {epoch}", leave=False, disable=not logger.isEnabledFor(logging.INFO)):
            batch = collate(order[start:start + size], self.model.vocabularies, self.model.encoder.min_chars)
            losses.append(self.train_step(batch)[0])

        return float(np.mean(losses)) if losses else 0.0


def evaluate_model(model: JointExtractor, dev: Sequence[AnnotatedSentence], batch_size: int) -> float:
    ''' Dev-set exact-match F1 '''
    return score(dev, predict_corpus(model, dev, batch_size)).f1


def fit(train: Sequence[AnnotatedSentence], dev: Sequence[AnnotatedSentence], config: TrainConfig,
        vocabularies: Optional[CorpusVocabularies] = None, out_dir: Optional[Union[str, Path]] = None,
        device: str = 'cpu') -> Checkpoint:
    '''
    Train a model and keep the parameters with the best dev F1.

    Heads are redrawn every epoch. Training stops after max_epochs, or once more than
    `patience` consecutive epochs fail to improve the best dev F1.

    Args:
        train (Sequence[AnnotatedSentence]): Training sentences.
        dev (Sequence[AnnotatedSentence]): Dev sentences used for model selection.
        config (TrainConfig): Model and optimization settings.
        vocabularies (Optional[CorpusVocabularies]): Prepared vocabularies; built from train when omitted.
        out_dir (Optional[Union[str, Path]]): Checkpoint directory to write, if any.
        device (str): Torch device.

    Returns:
        Checkpoint: The best model, in eval mode.

    Raises:
        EmptyCorpusError: If the training or dev corpus is empty.
        IngestionError: If a sentence is longer than max_sentence_length.
    '''
    if not train:
        raise EmptyCorpusError("Training corpus is empty")
    if not dev:
        raise EmptyCorpusError("Dev corpus is empty")

    too_long = [s.id for s in (*train, *dev) if s.n > config.max_sentence_length]
    if too_long:
        logger.error(f"{len(too_long)} sentence(s) exceed max_sentence_length={config.max_sentence_length}")
        raise IngestionError(f"{len(too_long)} sentence(s) exceed max_sentence_length={config.max_sentence_length}: "
                             f"{too_long[:5]}")

    seed_everything(config.seed)
    rng = random.Random(config.seed)

    if vocabularies is None:
        vocabularies = build_vocabularies(list(train), config.min_token_freq, config.lowercase_tokens)

    pretrained = None
    if config.pretrained_vectors:
        pretrained, _ = load_pretrained_vectors(config.pretrained_vectors, vocabularies.tokens,
                                                config.features.word_dim, seed=config.seed)

    model = JointExtractor(vocabularies, config, pretrained)
    trainer = Trainer(model, config, device)
    logger.info(f"Training on {len(train)} sentences, {sum(p.numel() for p in trainer.parameters)} parameters")

    best_f1, best_state, best_epoch, best_step = -1.0, None, 0, 0
    stale = 0

    for epoch in range(1, config.max_epochs + 1):
        instances = build_instances(train, model.tags, rng, config)
        if config.negative_heads and epoch > 1:
            added = add_negative_heads(model, instances, config.batch_size)
            logger.debug(f"Added {added} negative head(s)")

        loss = trainer.train_epoch(instances, rng, epoch)
        dev_f1 = evaluate_model(model, dev, config.batch_size)
        logger.info(f"Epoch {epoch}: loss {loss:.4f}, dev F1 {dev_f1:.4f}")

        if dev_f1 > best_f1:
            best_f1, best_epoch, best_step = dev_f1, epoch, trainer.global_step
            best_state = copy.deepcopy(model.state_dict())
            stale = 0
        else:
            stale += 1
            if stale > config.patience:
                logger.info(f"Early stopping after epoch {epoch}; best dev F1 {best_f1:.4f} at epoch {best_epoch}")
                break

    model.load_state_dict(best_state)
    model.eval()
    checkpoint = Checkpoint(model, vocabularies, config, best_f1, best_step, best_epoch)
    if out_dir is not None:
        save_checkpoint(out_dir, checkpoint)
    return checkpoint


def sweep_seeds(train: Sequence[AnnotatedSentence], dev: Sequence[AnnotatedSentence], config: TrainConfig,
                seeds: Sequence[int], vocabularies: Optional[CorpusVocabularies] = None,
                out_dir: Optional[Union[str, Path]] = None, device: str = 'cpu') -> Dict[str, object]:
    '''
    Train once per seed and summarize the dev F1 of the runs.

    Each run writes `seed-<s>/` under out_dir when given.

    Returns:
        Dict[str, object]: Per-seed F1, their mean and their standard deviation.
    '''
    scores: Dict[int, float] = {}
    for seed in seeds:
        run_dir = Path(out_dir) / f"seed-{seed}" if out_dir is not None else None
        checkpoint = fit(train, dev, config.model_copy(update={'seed': seed}), vocabularies, run_dir, device)
        scores[seed] = checkpoint.dev_f1

    values = np.array(list(scores.values()), dtype=np.float64)
    summary = {'dev_f1': scores, 'mean': float(values.mean()), 'stdev': float(values.std(ddof=1)) if len(values) > 1 else 0.0}
    logger.info(f"Dev F1 over {len(values)} seeds: {summary['mean']:.4f} ± {summary['stdev']:.4f}")
    return summary
