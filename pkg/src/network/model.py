import logging
from typing import List, NamedTuple, Optional, Sequence, Set
import torch
import torch.nn as nn
from .batching import SentenceBatch, TrainingBatch, tensorize
from .encoder import SentenceEncoder
from .extractors import HeadEntityExtractor, TailRelationExtractor
from .hbt import HierarchicalBoundaryTagger
from ..models.config import TrainConfig
from ..models.extraction import ExtractionResult, HeadExtraction, TailMention
from ..models.sentence import EntitySpan, TokenSequence, Triplet
from ..models.vocabulary import CorpusVocabularies, TagVocabulary
from ..utils.exceptions import IngestionError

# Configure logging
logger = logging.getLogger(__name__)


class JointLoss(NamedTuple):
    total: torch.Tensor
    head: torch.Tensor
    tail: torch.Tensor
    per_sentence: torch.Tensor   # (B,) detached, HE plus TER terms of each sentence


class JointExtractor(nn.Module):
    """
    Shared encoder, head-entity extractor and tail-entity/relation extractor.

    In pipeline mode the TER extractor reads its own encoder, so the two extractors share no parameters.

    Attributes:
        vocabularies (CorpusVocabularies): Vocabularies the id tensors refer to.
        tags (TagVocabulary): Tag spaces of the two taggers; single-type heads under binary_head_types.
        config (TrainConfig): Options the model was built with.
    """

    def __init__(self, vocabularies: CorpusVocabularies, config: TrainConfig,
                 pretrained: Optional[torch.Tensor] = None):
        super().__init__()
        self.vocabularies = vocabularies
        self.config = config
        self.tags: TagVocabulary = vocabularies.tags.binary() if config.binary_head_types else vocabularies.tags

        features = config.features
        C = config.max_sentence_length

        def make_encoder() -> SentenceEncoder:
            return SentenceEncoder(
                len(vocabularies.tokens), len(vocabularies.chars), len(vocabularies.pos), features,
                dropout=config.dropout, use_chars=not config.no_char, pretrained=pretrained,
                freeze_words=config.freeze_word_embeddings,
            )

        self.encoder = make_encoder()
        self.ter_encoder = make_encoder() if config.pipeline_mode else None

        self.head_extractor = HeadEntityExtractor(
            self.encoder.output_dim, len(self.tags.entity_types), C, features,
            hierarchical=not config.no_hierarchy,
        )
        self.tail_extractor = TailRelationExtractor(
            self.encoder.output_dim, len(self.tags.relation_types), C, features, max_len=C,
            use_position=not config.no_pht, anchor=config.head_distance_anchor,
            hierarchical=not config.no_hierarchy,
        )

    @property
    def device(self) -> torch.device:
        return next(self.parameters()).device

    def tensorize(self, sentences: Sequence[TokenSequence], ids: Optional[Sequence[Optional[str]]] = None) -> SentenceBatch:
        '''
        Id tensors for a batch of sentences, on the model's device.

        Raises:
            IngestionError: If a sentence is longer than max_sentence_length.
        '''
        limit = self.config.max_sentence_length
        for position, sentence in enumerate(sentences):
            if sentence.n > limit:
                sentence_id = ids[position] if ids is not None else str(position)
                raise IngestionError(f"{sentence.n} tokens exceed max_sentence_length={limit}", sentence_id=sentence_id)
        batch = tensorize(sentences, self.vocabularies, min_chars=self.encoder.min_chars, ids=ids)
        return batch.to(self.device)

    def forward(self, batch: TrainingBatch) -> JointLoss:
        '''
        Training loss L = L_HE + L_TER, each the batch mean of the per-sequence tagger losses.

        Both taggers are run with gold start distances. L_TER is zero when the batch has no heads.
        '''
        enc = self.encoder(batch.sentences)
        he_output = self.head_extractor(enc, batch.he_targets)
        he_losses = HierarchicalBoundaryTagger.loss(he_output, batch.he_targets, enc.mask)
        head_loss = he_losses.mean()
        per_sentence = he_losses.detach().clone()

        if batch.has_heads and batch.ter_targets is not None:
            ter_enc = self.ter_encoder(batch.sentences) if self.ter_encoder is not None else enc
            ter_output = self.tail_extractor(ter_enc, batch.ter_rows, batch.ter_heads, batch.ter_targets)
            ter_mask = ter_enc.mask.index_select(0, batch.ter_rows)
            ter_losses = HierarchicalBoundaryTagger.loss(ter_output, batch.ter_targets, ter_mask)
            tail_loss = ter_losses.mean()
            per_sentence.index_add_(0, batch.ter_rows, ter_losses.detach())
        else:
            tail_loss = torch.zeros((), dtype=head_loss.dtype, device=head_loss.device)

        return JointLoss(head_loss + tail_loss, head_loss, tail_loss, per_sentence)

    @torch.no_grad()
    def extract_batch(self, batch: SentenceBatch) -> List[ExtractionResult]:
        '''
        Heads of every sentence, then the tails of every head in one batched TER pass.

        The shared encoder runs once for the batch; every head becomes one row of the TER tagger.
        '''
        was_training = self.training
        self.eval()
        try:
            enc = self.encoder(batch)
            head_sets = self.head_extractor.extract(enc)

            rows: List[int] = []
            heads: List[EntitySpan] = []
            results: List[ExtractionResult] = []
            for b, spans in enumerate(head_sets):
                result = ExtractionResult()
                for span in sorted(spans):
                    head = EntitySpan(start=span.start, end=span.end,
                                      entity_type=self.tags.entity_types.label(span.label))
                    result.heads.append(HeadExtraction(head=head))
                    rows.append(b)
                    heads.append(head)
                results.append(result)

            if not rows:
                return results

            ter_enc = self.ter_encoder(batch) if self.ter_encoder is not None else enc
            row_tensor = torch.tensor(rows, dtype=torch.long, device=enc.hidden.device)
            head_tensor = torch.tensor([h.bounds for h in heads], dtype=torch.long, device=enc.hidden.device)
            tail_sets = self.tail_extractor.extract(ter_enc, row_tensor, head_tensor)

            cursor = {b: iter(result.heads) for b, result in enumerate(results)}
            for b, tails in zip(rows, tail_sets):
                extraction = next(cursor[b])
                extraction.tails = [
                    TailMention(tail=EntitySpan(start=t.start, end=t.end),
                                relation=self.tags.relation_types.label(t.label))
                    for t in sorted(tails)
                ]
            return results
        finally:
            self.train(was_training)

    def extract_triplets(self, s: TokenSequence) -> Set[Triplet]:
        ''' Triplets of one sentence, entity types omitted '''
        result = self.extract_batch(self.tensorize([s]))[0]
        return set(result.triplets)
