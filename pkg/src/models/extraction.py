from typing import List
from pydantic import BaseModel, Field
from .sentence import EntitySpan, Triplet


class TailMention(BaseModel):
    ''' A tail entity with the relation linking it to its head '''
    tail: EntitySpan = Field(description="Tail entity, without type")
    relation: str    = Field(min_length=1, description="Relation label")


class HeadExtraction(BaseModel):
    ''' An extracted head entity and the tails found for it '''
    head: EntitySpan          = Field(description="Head entity with its predicted type")
    tails: List[TailMention]  = Field(default_factory=list, description="Tails conditioned on this head")


class ExtractionResult(BaseModel):
    ''' Everything extracted from one sentence '''
    heads: List[HeadExtraction] = Field(default_factory=list, description="Heads in sentence order")

    @property
    def triplets(self) -> List[Triplet]:
        '''
        Assembled triplets, entity types dropped, deduplicated on (head span, relation, tail span).
        '''
        seen = {}
        for extraction in self.heads:
            head = EntitySpan(start=extraction.head.start, end=extraction.head.end)
            for mention in extraction.tails:
                triplet = Triplet(head=head, relation=mention.relation, tail=mention.tail)
                seen.setdefault(triplet.key(), triplet)
        return [seen[key] for key in sorted(seen)]
