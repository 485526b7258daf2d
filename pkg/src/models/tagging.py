from enum import Enum
from typing import List, NamedTuple
from pydantic import BaseModel, Field, NonNegativeInt, PositiveInt, model_validator


class TagSpace(str, Enum):
    ''' Which vocabulary the ids of a tagging refer to '''
    ENTITY = "entity"
    RELATION = "relation"


class TypedSpan(NamedTuple):
    ''' Decoded span; label is a tag id, never the "O" id '''
    start: int
    end: int
    label: int


class BoundaryTagging(BaseModel):
    ''' Paired start/end tag-id sequences for one tagging task '''
    start_tags: List[NonNegativeInt] = Field(description="Start tag id per token")
    end_tags: List[NonNegativeInt]   = Field(description="End tag id per token")
    tag_space: TagSpace              = Field(description="Tag space of the ids")

    @model_validator(mode="after")
    def _validate_lengths(self):
        if len(self.start_tags) != len(self.end_tags):
            raise ValueError("Start and end tag sequences must have the same length")
        return self

    @property
    def n(self) -> int:
        return len(self.start_tags)


class StartDistanceSequence(BaseModel):
    ''' Distance of every token to the nearest start at or before it, C when none exists '''
    values: List[NonNegativeInt] = Field(description="Distance per token")
    C: PositiveInt               = Field(description="Sentinel for tokens without a preceding start")
