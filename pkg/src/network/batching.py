from dataclasses import dataclass, field
from typing import List, Optional, Sequence
import torch
from ..models.sentence import TokenSequence
from ..models.tagging import BoundaryTagging, StartDistanceSequence
from ..models.vocabulary import CorpusVocabularies
from ..utils.constants import MAX_TOKEN_CHARS


@dataclass
class SentenceBatch:
    ''' Padded index tensors for a batch of sentences '''
    word_ids: torch.Tensor     # (B, T)
    char_ids: torch.Tensor     # (B, T, L)
    pos_ids: torch.Tensor      # (B, T)
    mask: torch.Tensor         # (B, T) bool
    lengths: torch.Tensor      # (B,) on cpu
    ids: List[Optional[str]] = field(default_factory=list)

    def __len__(self) -> int:
        return self.word_ids.size(0)

    def to(self, device) -> "SentenceBatch":
        return SentenceBatch(
            word_ids=self.word_ids.to(device),
            char_ids=self.char_ids.to(device),
            pos_ids=self.pos_ids.to(device),
            mask=self.mask.to(device),
            lengths=self.lengths,
            ids=self.ids,
        )


@dataclass
class TaggingTargets:
    ''' Gold start/end tags and the gold start distances, padded to the batch length '''
    start: torch.Tensor        # (K, T)
    end: torch.Tensor          # (K, T)
    distances: torch.Tensor    # (K, T)

    def to(self, device) -> "TaggingTargets":
        return TaggingTargets(self.start.to(device), self.end.to(device), self.distances.to(device))


def tensorize(sentences: Sequence[TokenSequence], vocabularies: CorpusVocabularies, min_chars: int = 1,
              ids: Optional[Sequence[Optional[str]]] = None) -> SentenceBatch:
    '''
    Map a batch of sentences to padded id tensors.

    Tokens longer than MAX_TOKEN_CHARS are truncated; the character axis is at least
    min_chars long so a convolution of that width always yields one position.

    Args:
        sentences (Sequence[TokenSequence]): The sentences.
        vocabularies (CorpusVocabularies): Vocabularies; unseen entries map to <unk>.
        min_chars (int): Minimum length of the character axis.
        ids (Optional[Sequence[Optional[str]]]): Sentence ids carried along for diagnostics.

    Returns:
        SentenceBatch: Index tensors, 0 everywhere outside a sentence.
    '''
    lengths = [s.n for s in sentences]
    batch_size, max_len = len(sentences), max(lengths)
    char_len = max(min_chars, max(min(len(t), MAX_TOKEN_CHARS) for s in sentences for t in s.tokens))

    word_ids = torch.zeros(batch_size, max_len, dtype=torch.long)
    char_ids = torch.zeros(batch_size, max_len, char_len, dtype=torch.long)
    pos_ids = torch.zeros(batch_size, max_len, dtype=torch.long)

    for b, s in enumerate(sentences):
        word_ids[b, :s.n] = torch.tensor([vocabularies.token_id(t) for t in s.tokens])
        pos_ids[b, :s.n] = torch.tensor([vocabularies.pos.id(p) for p in s.pos_tags])
        for i, token in enumerate(s.tokens):
            chars = token[:MAX_TOKEN_CHARS]
            char_ids[b, i, :len(chars)] = torch.tensor([vocabularies.chars.id(c) for c in chars])

    lengths_tensor = torch.tensor(lengths, dtype=torch.long)
    mask = torch.arange(max_len).unsqueeze(0) < lengths_tensor.unsqueeze(1)
    return SentenceBatch(word_ids, char_ids, pos_ids, mask, lengths_tensor,
                         list(ids) if ids is not None else [None] * batch_size)


def stack_targets(taggings: Sequence[BoundaryTagging], distances: Sequence[StartDistanceSequence],
                  max_len: int) -> TaggingTargets:
    ''' Pad taggings to max_len; padding positions hold "O" and the distance sentinel '''
    size = len(taggings)
    start = torch.zeros(size, max_len, dtype=torch.long)
    end = torch.zeros(size, max_len, dtype=torch.long)
    dist = torch.zeros(size, max_len, dtype=torch.long)

    for k, (tagging, sequence) in enumerate(zip(taggings, distances)):
        n = tagging.n
        start[k, :n] = torch.tensor(tagging.start_tags)
        end[k, :n] = torch.tensor(tagging.end_tags)
        dist[k, :n] = torch.tensor(sequence.values)
        dist[k, n:] = sequence.C

    return TaggingTargets(start, end, dist)


@dataclass
class TrainingBatch:
    ''' Sentences with their HE targets and the TER rows conditioned on one head each '''
    sentences: SentenceBatch
    he_targets: TaggingTargets
    ter_rows: torch.Tensor                     # (K,) sentence index of every TER row
    ter_heads: torch.Tensor                    # (K, 2) conditioning head start/end
    ter_targets: Optional[TaggingTargets] = None

    @property
    def has_heads(self) -> bool:
        return self.ter_rows.numel() > 0

    def to(self, device) -> "TrainingBatch":
        return TrainingBatch(
            sentences=self.sentences.to(device),
            he_targets=self.he_targets.to(device),
            ter_rows=self.ter_rows.to(device),
            ter_heads=self.ter_heads.to(device),
            ter_targets=self.ter_targets.to(device) if self.ter_targets is not None else None,
        )
