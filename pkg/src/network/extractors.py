import logging
from typing import List, NamedTuple, Optional, Set
import torch
import torch.nn as nn
from .batching import TaggingTargets
from .encoder import EncodedBatch
from .hbt import HBTInput, HierarchicalBoundaryTagger, TaggerOutput
from ..models.config import HeadDistanceAnchor, TokenFeatureConfig
from ..models.tagging import TypedSpan

# Configure logging
logger = logging.getLogger(__name__)


class HeadEntityContext(NamedTuple):
    ''' Conditioning heads of a TER pass, one per row '''
    spans: torch.Tensor            # (K, 2) start/end token of each head
    representation: torch.Tensor   # (K, 4H) [h_start; h_end]
    distances: torch.Tensor        # (K, T) signed distance of every token to the anchor


class HeadRelativePositionEmbedding(nn.Module):
    ''' Embedding of signed token distances to the head, clipped to [-max_len, max_len] '''

    def __init__(self, max_len: int, dim: int):
        super().__init__()
        self.max_len = max_len
        self.table = nn.Embedding(2 * max_len + 1, dim)
        self.output_dim = dim

    def forward(self, distances: torch.Tensor) -> torch.Tensor:
        return self.table(distances.clamp(-self.max_len, self.max_len) + self.max_len)


def build_he_features(enc: EncodedBatch) -> HBTInput:
    ''' HE features: base h_i, auxiliary g repeated at every token '''
    aux = enc.global_.unsqueeze(1).expand(-1, enc.hidden.size(1), -1)
    return HBTInput(enc.hidden, aux, enc.mask, enc.lengths)


def head_context(enc: EncodedBatch, rows: torch.Tensor, heads: torch.Tensor,
                 anchor: HeadDistanceAnchor = HeadDistanceAnchor.START) -> HeadEntityContext:
    '''
    Gather the head representation of every TER row.

    Args:
        enc (EncodedBatch): Encoder output for the sentences.
        rows (torch.Tensor): Sentence index of every head, shape (K,).
        heads (torch.Tensor): Head start/end tokens, shape (K, 2).
        anchor (HeadDistanceAnchor): Head token the relative distances are measured from.

    Returns:
        HeadEntityContext: Spans, [h_start; h_end] and per-token distances.

    Raises:
        ValueError: If a head span is empty, reversed or outside its sentence.
    '''
    lengths = enc.lengths.index_select(0, rows.cpu())
    starts, ends = heads[:, 0].cpu(), heads[:, 1].cpu()
    invalid = (starts < 0) | (starts > ends) | (ends >= lengths)
    if bool(invalid.any()):
        bad = int(invalid.nonzero()[0, 0])
        raise ValueError(f"Head span {tuple(heads[bad].tolist())} is out of range for a sentence of "
                         f"{int(lengths[bad])} tokens")

    hidden = enc.hidden.index_select(0, rows)
    index = torch.arange(hidden.size(0), device=hidden.device)
    heads = heads.to(hidden.device)
    representation = torch.cat([hidden[index, heads[:, 0]], hidden[index, heads[:, 1]]], dim=-1)

    anchor_token = heads[:, 0] if anchor == HeadDistanceAnchor.START else heads[:, 1]
    positions = torch.arange(hidden.size(1), device=hidden.device).unsqueeze(0)
    return HeadEntityContext(heads, representation, positions - anchor_token.unsqueeze(1))


class HeadEntityExtractor(nn.Module):
    ''' HBT over x~_i = [h_i; g] in the entity tag space '''

    def __init__(self, encoder_dim: int, num_tags: int, C: int, features: TokenFeatureConfig,
                 hierarchical: bool = True):
        super().__init__()
        self.tagger = HierarchicalBoundaryTagger(
            encoder_dim, encoder_dim, features.hidden_dim, num_tags, C,
            position_dim=features.position_dim, hierarchical=hierarchical,
        )

    def forward(self, enc: EncodedBatch, gold: Optional[TaggingTargets] = None) -> TaggerOutput:
        return self.tagger(build_he_features(enc), gold)

    def extract(self, enc: EncodedBatch) -> List[Set[TypedSpan]]:
        return self.tagger.extract(build_he_features(enc))


class TailRelationExtractor(nn.Module):
    """
    HBT over x-_i = [h_i; g; h^h; p^ht_i] in the relation tag space, one row per conditioning head.

    Attributes:
        position (Optional[HeadRelativePositionEmbedding]): The p^ht table, None when disabled.
        anchor (HeadDistanceAnchor): Head token p^ht distances are measured from.
    """

    def __init__(self, encoder_dim: int, num_tags: int, C: int, features: TokenFeatureConfig,
                 max_len: int, use_position: bool = True,
                 anchor: HeadDistanceAnchor = HeadDistanceAnchor.START, hierarchical: bool = True):
        super().__init__()
        self.anchor = anchor
        self.position = HeadRelativePositionEmbedding(max_len, features.position_dim) if use_position else None
        aux_dim = encoder_dim + 2 * encoder_dim + (self.position.output_dim if self.position else 0)
        self.tagger = HierarchicalBoundaryTagger(
            encoder_dim, aux_dim, features.hidden_dim, num_tags, C,
            position_dim=features.position_dim, hierarchical=hierarchical,
        )

    def build_features(self, enc: EncodedBatch, rows: torch.Tensor, heads: torch.Tensor) -> HBTInput:
        '''
        TER features of every (sentence, head) row.

        Args:
            enc (EncodedBatch): Encoder output for the sentences.
            rows (torch.Tensor): Sentence index of every head, shape (K,).
            heads (torch.Tensor): Head start/end tokens, shape (K, 2).

        Returns:
            HBTInput: K sequences; the auxiliary vector is [g; h^h; p^ht_i].
        '''
        context = head_context(enc, rows, heads, self.anchor)
        hidden = enc.hidden.index_select(0, rows)
        max_len = hidden.size(1)

        parts = [
            enc.global_.index_select(0, rows).unsqueeze(1).expand(-1, max_len, -1),
            context.representation.unsqueeze(1).expand(-1, max_len, -1),
        ]
        if self.position is not None:
            parts.append(self.position(context.distances))

        cpu_rows = rows.cpu()
        return HBTInput(hidden, torch.cat(parts, dim=-1), enc.mask.index_select(0, rows),
                        enc.lengths.index_select(0, cpu_rows))

    def forward(self, enc: EncodedBatch, rows: torch.Tensor, heads: torch.Tensor,
                gold: Optional[TaggingTargets] = None) -> TaggerOutput:
        return self.tagger(self.build_features(enc, rows, heads), gold)

    def extract(self, enc: EncodedBatch, rows: torch.Tensor, heads: torch.Tensor) -> List[Set[TypedSpan]]:
        return self.tagger.extract(self.build_features(enc, rows, heads))
