import logging
from typing import NamedTuple, Optional
import torch
import torch.nn as nn
from torch.nn.utils.rnn import pack_padded_sequence, pad_packed_sequence
from .batching import SentenceBatch
from ..models.config import TokenFeatureConfig

# Configure logging
logger = logging.getLogger(__name__)


class EncodedBatch(NamedTuple):
    ''' Shared encoder output '''
    hidden: torch.Tensor    # (B, T, 2H); zero at padding
    global_: torch.Tensor   # (B, 2H); max over real tokens
    mask: torch.Tensor      # (B, T) bool
    lengths: torch.Tensor   # (B,) on cpu


class PackedBiLSTM(nn.Module):
    """
    Single-layer bidirectional LSTM over padded batches.

    Output at position i is [forward state at i; backward state at i]; padding positions are zero.
    """

    def __init__(self, input_dim: int, hidden_dim: int):
        super().__init__()
        self.lstm = nn.LSTM(input_dim, hidden_dim, batch_first=True, bidirectional=True)
        self.output_dim = 2 * hidden_dim

    def forward(self, inputs: torch.Tensor, lengths: torch.Tensor) -> torch.Tensor:
        packed = pack_padded_sequence(inputs, lengths.cpu(), batch_first=True, enforce_sorted=False)
        outputs, _ = self.lstm(packed)
        outputs, _ = pad_packed_sequence(outputs, batch_first=True, total_length=inputs.size(1))
        return outputs


def masked_max(states: torch.Tensor, mask: torch.Tensor) -> torch.Tensor:
    ''' Dimension-wise max over the positions where mask is true '''
    return states.masked_fill(~mask.unsqueeze(-1), float('-inf')).max(dim=1).values


class CharCNN(nn.Module):
    ''' Character embeddings, one convolution, max-pooled over the window positions of each token '''

    def __init__(self, num_chars: int, features: TokenFeatureConfig):
        super().__init__()
        self.window = features.char_cnn_window
        self.embedding = nn.Embedding(num_chars, features.char_emb_dim, padding_idx=0)
        self.conv = nn.Conv1d(features.char_emb_dim, features.char_cnn_filters, kernel_size=self.window)
        self.output_dim = features.char_cnn_filters

    def forward(self, char_ids: torch.Tensor) -> torch.Tensor:
        batch_size, max_len, char_len = char_ids.shape
        flat = char_ids.view(-1, char_len)
        convolved = self.conv(self.embedding(flat).transpose(1, 2))
        # Windows starting past the last full window of a token are ignored
        windows = ((flat != 0).sum(dim=1) - self.window + 1).clamp_min(1)
        valid = torch.arange(convolved.size(2), device=flat.device).unsqueeze(0) < windows.unsqueeze(1)
        convolved = convolved.masked_fill(~valid.unsqueeze(1), float('-inf'))
        return convolved.max(dim=2).values.view(batch_size, max_len, -1)


class SentenceEncoder(nn.Module):
    """
    Shared sentence encoder.

    x_i = [word embedding; char-CNN features; POS embedding], dropout, a BiLSTM, dropout,
    and the global vector g max-pooled over the resulting hidden states.
    """

    def __init__(self, num_words: int, num_chars: int, num_pos: int, features: TokenFeatureConfig,
                 dropout: float = 0.4, use_chars: bool = True, pretrained: Optional[torch.Tensor] = None,
                 freeze_words: bool = False):
        super().__init__()
        self.features = features
        self.word_embedding = nn.Embedding(num_words, features.word_dim, padding_idx=0)
        if pretrained is not None:
            if pretrained.shape != self.word_embedding.weight.shape:
                raise ValueError(f"Pretrained matrix {tuple(pretrained.shape)} does not match "
                                 f"{tuple(self.word_embedding.weight.shape)}")
            self.word_embedding.weight.data.copy_(pretrained)
        self.word_embedding.weight.requires_grad = not freeze_words

        self.char_cnn = CharCNN(num_chars, features) if use_chars else None
        self.pos_embedding = nn.Embedding(num_pos, features.pos_dim, padding_idx=0)
        self.dropout = nn.Dropout(dropout)

        self.input_dim = features.word_dim + features.pos_dim + (self.char_cnn.output_dim if self.char_cnn else 0)
        self.bilstm = PackedBiLSTM(self.input_dim, features.hidden_dim)
        self.output_dim = self.bilstm.output_dim

    @property
    def min_chars(self) -> int:
        return self.char_cnn.window if self.char_cnn else 1

    def embed_tokens(self, batch: SentenceBatch) -> torch.Tensor:
        ''' Per-token feature vectors x_i, shape (B, T, input_dim) '''
        parts = [self.word_embedding(batch.word_ids)]
        if self.char_cnn is not None:
            parts.append(self.char_cnn(batch.char_ids))
        parts.append(self.pos_embedding(batch.pos_ids))
        return torch.cat(parts, dim=-1)

    def encode(self, features: torch.Tensor, mask: torch.Tensor, lengths: torch.Tensor) -> EncodedBatch:
        ''' BiLSTM pass over x_i and max-pooling of the hidden states into g '''
        hidden = self.dropout(self.bilstm(self.dropout(features), lengths))
        return EncodedBatch(hidden, masked_max(hidden, mask), mask, lengths)

    def forward(self, batch: SentenceBatch) -> EncodedBatch:
        return self.encode(self.embed_tokens(batch), batch.mask, batch.lengths)
