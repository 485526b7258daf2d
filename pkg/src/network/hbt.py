import logging
from typing import List, NamedTuple, Optional, Set, Tuple
import torch
import torch.nn as nn
from .batching import TaggingTargets
from .encoder import PackedBiLSTM
from ..models.tagging import TypedSpan
from ..services.tagset import decode_tags, start_distances
from ..utils.constants import PROBABILITY_FLOOR

# Configure logging
logger = logging.getLogger(__name__)


class HBTInput(NamedTuple):
    ''' Per-token base vectors h_i and auxiliary vectors a_i '''
    base: torch.Tensor      # (K, T, base_dim)
    aux: torch.Tensor       # (K, T, aux_dim)
    mask: torch.Tensor      # (K, T) bool
    lengths: torch.Tensor   # (K,) on cpu


class TaggerOutput(NamedTuple):
    start_probs: torch.Tensor   # (K, T, num_tags)
    end_probs: torch.Tensor     # (K, T, num_tags)
    teacher_forced: bool        # end layer saw gold start distances


def predicted_distances(start_tags: torch.Tensor, lengths: torch.Tensor, C: int) -> torch.Tensor:
    ''' Start distances of predicted start tags, C at padding '''
    distances = torch.full_like(start_tags, C)
    for k, n in enumerate(lengths.tolist()):
        values = start_distances(start_tags[k, :n].tolist(), C).values
        distances[k, :n] = torch.tensor(values, dtype=distances.dtype)
    return distances


class HierarchicalBoundaryTagger(nn.Module):
    """
    Two-layer boundary tagger: start tags from BiLSTM_sta over [h_i; a_i], then end tags from
    BiLSTM_end over [h^sta_i; a_i; p^se_i], where p^se_i embeds the distance to the nearest start.

    With hierarchical=False both tag sequences are read off the start layer and neither the
    end layer nor the distance embedding exists.

    Attributes:
        num_tags (int): Size of the tag space, "O" included.
        C (int): Distance sentinel; the distance table has C + 1 rows.
        hierarchical (bool): Whether the end layer exists.
    """

    def __init__(self, base_dim: int, aux_dim: int, hidden_dim: int, num_tags: int, C: int,
                 position_dim: int = 30, hierarchical: bool = True):
        super().__init__()
        self.num_tags = num_tags
        self.C = C
        self.hierarchical = hierarchical

        self.start_layer = PackedBiLSTM(base_dim + aux_dim, hidden_dim)
        self.start_projection = nn.Linear(self.start_layer.output_dim, num_tags)

        if hierarchical:
            self.distance_embedding = nn.Embedding(C + 1, position_dim)
            self.end_layer = PackedBiLSTM(self.start_layer.output_dim + aux_dim + position_dim, hidden_dim)
        else:
            self.distance_embedding = None
            self.end_layer = None
        self.end_projection = nn.Linear(hidden_dim * 2, num_tags)

    def forward_start(self, inputs: HBTInput) -> Tuple[torch.Tensor, torch.Tensor]:
        '''
        Start tag distributions and the start-layer states.

        Returns:
            Tuple[torch.Tensor, torch.Tensor]: Probabilities (K, T, num_tags) and h^sta (K, T, 2H).
        '''
        states = self.start_layer(torch.cat([inputs.base, inputs.aux], dim=-1), inputs.lengths)
        return torch.softmax(self.start_projection(states), dim=-1), states

    def forward_end(self, start_states: torch.Tensor, inputs: HBTInput, distances: torch.Tensor) -> torch.Tensor:
        '''
        End tag distributions given the start-layer states and the start distances.

        Raises:
            ValueError: If a distance exceeds C.
        '''
        if not self.hierarchical:
            return torch.softmax(self.end_projection(start_states), dim=-1)

        if distances.numel() and int(distances.max()) > self.C:
            raise ValueError(f"Start distance {int(distances.max())} exceeds the sentinel {self.C}")

        features = torch.cat([start_states, inputs.aux, self.distance_embedding(distances)], dim=-1)
        states = self.end_layer(features, inputs.lengths)
        return torch.softmax(self.end_projection(states), dim=-1)

    def forward(self, inputs: HBTInput, gold: Optional[TaggingTargets] = None) -> TaggerOutput:
        '''
        Both tagging layers. With gold targets the end layer receives the gold start distances,
        otherwise the distances of the predicted start tags.
        '''
        start_probs, states = self.forward_start(inputs)
        if gold is not None:
            distances = gold.distances
        else:
            distances = predicted_distances(start_probs.argmax(dim=-1), inputs.lengths, self.C)
        end_probs = self.forward_end(states, inputs, distances)
        return TaggerOutput(start_probs, end_probs, teacher_forced=gold is not None)

    @staticmethod
    def loss(output: TaggerOutput, gold: TaggingTargets, mask: torch.Tensor) -> torch.Tensor:
        '''
        Per-sequence negative log-likelihood of the gold start and end tags, averaged over tokens.

        Returns:
            torch.Tensor: Loss per sequence, shape (K,).

        Raises:
            ValueError: If the output was not computed from gold start distances.
        '''
        if not output.teacher_forced:
            raise ValueError("Training loss requires an output computed with gold start distances")

        def log_likelihood(probs: torch.Tensor, tags: torch.Tensor) -> torch.Tensor:
            picked = probs.gather(-1, tags.unsqueeze(-1)).squeeze(-1)
            return torch.log(picked.clamp_min(PROBABILITY_FLOOR))

        mask = mask.to(output.start_probs.dtype)
        total = (log_likelihood(output.start_probs, gold.start) + log_likelihood(output.end_probs, gold.end)) * mask
        return -total.sum(dim=1) / mask.sum(dim=1)

    @torch.no_grad()
    def extract(self, inputs: HBTInput) -> List[Set[TypedSpan]]:
        ''' Greedy start tags, their distances, greedy end tags, then multi-span decoding per sequence '''
        output = self.forward(inputs)
        start_tags = output.start_probs.argmax(dim=-1)
        end_tags = output.end_probs.argmax(dim=-1)

        results: List[Set[TypedSpan]] = []
        for k, n in enumerate(inputs.lengths.tolist()):
            spans, dropped = decode_tags(start_tags[k, :n].tolist(), end_tags[k, :n].tolist())
            if dropped:
                logger.debug(f"Dropped {dropped} unmatched start(s)")
            results.append(spans)
        return results
