from enum import Enum
from typing import List, Optional, Tuple
from pydantic import BaseModel, ConfigDict, Field, NonNegativeInt, field_validator, model_validator


class SentenceCategory(str, Enum):
    ''' Overlap category of an annotated sentence '''
    NORMAL = "Normal"
    SEO = "SEO"
    EPO = "EPO"


class CountBucket(str, Enum):
    ''' Triplet-count bucket of an annotated sentence '''
    ONE = "1"
    TWO = "2"
    THREE = "3"
    FOUR = "4"
    FIVE_OR_MORE = "≥5"


class TokenSequence(BaseModel):
    ''' Tokenized sentence with one POS tag per token '''
    model_config = ConfigDict(populate_by_name=True)

    tokens: List[str]   = Field(min_length=1, description="Surface tokens")
    pos_tags: List[str] = Field(alias="pos", description="POS tag per token")

    @field_validator('tokens')
    def _validate_tokens(cls, value):
        if any(token == "" for token in value):
            raise ValueError("Tokens cannot be empty strings")
        return value

    @model_validator(mode="after")
    def _validate_lengths(self):
        if len(self.tokens) != len(self.pos_tags):
            raise ValueError(f"Got {len(self.tokens)} tokens but {len(self.pos_tags)} POS tags")
        return self

    @property
    def n(self) -> int:
        return len(self.tokens)


class EntitySpan(BaseModel):
    ''' Inclusive 0-based token span with an entity type '''
    model_config = ConfigDict(frozen=True, populate_by_name=True)

    start: NonNegativeInt = Field(description="First token index")
    end: NonNegativeInt   = Field(description="Last token index (inclusive)")
    entity_type: Optional[str] = Field(None, alias="type", description="Entity type label, omitted in predictions")

    @model_validator(mode="after")
    def _validate_order(self):
        if self.start > self.end:
            raise ValueError(f"Span start {self.start} is after its end {self.end}")
        return self

    @property
    def bounds(self) -> Tuple[int, int]:
        return (self.start, self.end)

    def fits(self, n: int) -> bool:
        return self.end < n


class Triplet(BaseModel):
    ''' A (head, relation, tail) fact '''
    model_config = ConfigDict(frozen=True)

    head: EntitySpan = Field(description="Head entity")
    relation: str    = Field(min_length=1, description="Relation label")
    tail: EntitySpan = Field(description="Tail entity")

    def key(self) -> Tuple[int, int, str, int, int]:
        ''' Identity used for matching: span offsets and relation, entity types excluded '''
        return (self.head.start, self.head.end, self.relation, self.tail.start, self.tail.end)


class AnnotatedSentence(BaseModel):
    ''' A sentence with its gold (or predicted) triplets '''
    id: Optional[str]        = Field(None, description="Sentence identifier")
    sentence: TokenSequence  = Field(description="Tokens and POS tags")
    triplets: List[Triplet]  = Field(default_factory=list, description="Triplets")

    @model_validator(mode="before")
    @classmethod
    def _accept_flat_record(cls, data):
        ''' Accept the flat native record layout {tokens, pos, triplets} '''
        if isinstance(data, dict) and 'sentence' not in data and 'tokens' in data:
            data = dict(data)
            data['sentence'] = {'tokens': data.pop('tokens'), 'pos': data.pop('pos', None)}
        return data

    @model_validator(mode="after")
    def _validate_triplets(self):
        n = self.sentence.n
        seen = set()
        for triplet in self.triplets:
            for role, span in (('head', triplet.head), ('tail', triplet.tail)):
                if not span.fits(n):
                    raise ValueError(f"{role} span {span.bounds} is out of range for {n} tokens")
            if triplet.key() in seen:
                raise ValueError(f"Duplicate triplet {triplet.key()}")
            seen.add(triplet.key())
        return self

    @property
    def n(self) -> int:
        return self.sentence.n

    def head_spans(self) -> List[EntitySpan]:
        ''' Distinct head spans in order of first appearance '''
        heads: List[EntitySpan] = []
        for triplet in self.triplets:
            if triplet.head not in heads:
                heads.append(triplet.head)
        return heads

    def to_record(self) -> dict:
        ''' Flat native record as written to corpus files '''
        record = {
            'tokens': list(self.sentence.tokens),
            'pos': list(self.sentence.pos_tags),
            'triplets': [t.model_dump(by_alias=True, exclude_none=True) for t in self.triplets],
        }
        if self.id is not None:
            record = {'id': self.id, **record}
        return record
