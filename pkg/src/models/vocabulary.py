from collections import Counter
from typing import Dict, Iterable, List, Optional
from pydantic import BaseModel, Field, PrivateAttr, model_validator
from ..utils.constants import OUTSIDE_LABEL, PAD_TOKEN, UNK_TOKEN, BINARY_ENTITY_LABEL


class LabelVocabulary(BaseModel):
    ''' Bidirectional label <-> id map; ids are list positions '''
    labels: List[str]       = Field(description="Labels, id = position")
    unknown: Optional[str]  = Field(None, description="Label returned for unseen entries")

    _index: Dict[str, int] = PrivateAttr(default_factory=dict)

    @model_validator(mode="after")
    def _validate_labels(self):
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("Vocabulary labels must be unique")
        if self.unknown is not None and self.unknown not in self.labels:
            raise ValueError(f"Unknown label {self.unknown!r} is not registered")
        return self

    def model_post_init(self, __context) -> None:
        self._index = {label: i for i, label in enumerate(self.labels)}

    def __len__(self) -> int:
        return len(self.labels)

    def __contains__(self, label: str) -> bool:
        return label in self._index

    def id(self, label: str) -> int:
        ''' Id of a label, falling back to the unknown entry when one exists '''
        if label in self._index:
            return self._index[label]
        if self.unknown is not None:
            return self._index[self.unknown]
        raise KeyError(label)

    def label(self, index: int) -> str:
        return self.labels[index]

    @classmethod
    def from_counts(cls, counts: Counter, reserved: Iterable[str] = (PAD_TOKEN, UNK_TOKEN),
                    min_freq: int = 1, unknown: Optional[str] = UNK_TOKEN) -> "LabelVocabulary":
        ''' Reserved labels first, then every entry reaching min_freq by descending count '''
        reserved = list(reserved)
        kept = sorted((k for k, c in counts.items() if c >= min_freq and k not in reserved),
                      key=lambda k: (-counts[k], k))
        return cls(labels=reserved + kept, unknown=unknown)


class TagVocabulary(BaseModel):
    ''' Entity-type and relation-type tag spaces, both with "O" at id 0 '''
    entity_types: LabelVocabulary   = Field(description="HE tag space")
    relation_types: LabelVocabulary = Field(description="TER tag space")

    @model_validator(mode="after")
    def _validate_outside(self):
        for name, vocab in (('entity_types', self.entity_types), ('relation_types', self.relation_types)):
            if not vocab.labels or vocab.labels[0] != OUTSIDE_LABEL:
                raise ValueError(f"{name} must reserve {OUTSIDE_LABEL!r} at id 0")
        return self

    @classmethod
    def from_labels(cls, entity_types: Iterable[str], relation_types: Iterable[str]) -> "TagVocabulary":
        return cls(
            entity_types=LabelVocabulary(labels=[OUTSIDE_LABEL] + sorted(set(entity_types))),
            relation_types=LabelVocabulary(labels=[OUTSIDE_LABEL] + sorted(set(relation_types))),
        )

    def binary(self) -> "TagVocabulary":
        ''' Same relations, entity types collapsed into a single head label '''
        return TagVocabulary(
            entity_types=LabelVocabulary(labels=[OUTSIDE_LABEL, BINARY_ENTITY_LABEL]),
            relation_types=self.relation_types,
        )


class CorpusVocabularies(BaseModel):
    ''' Every vocabulary a model needs '''
    tokens: LabelVocabulary = Field(description="Word vocabulary")
    chars: LabelVocabulary  = Field(description="Character vocabulary")
    pos: LabelVocabulary    = Field(description="POS vocabulary")
    tags: TagVocabulary     = Field(description="Entity/relation tag spaces")
    lowercase_tokens: bool  = Field(False, description="Whether word lookups are lower-cased")

    def token_id(self, token: str) -> int:
        return self.tokens.id(token.lower() if self.lowercase_tokens else token)
