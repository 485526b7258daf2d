import random
from typing import Dict, List, Optional, Sequence, Tuple
from ..models.sentence import AnnotatedSentence, EntitySpan, Triplet

ENTITY_POOLS: Dict[str, List[str]] = {
    'PER': [
        'John Smith', 'Mary Jones', 'Barack Obama', 'Angela Merkel', 'Li Wei', 'Ana Maria Lopez',
        'Peter Brown', 'Sofia Rossi', 'Ahmed Khan', 'Yuki Tanaka', 'Carlos Silva', 'Emma Dubois',
        'Olga Petrova', 'David Cohen', 'Grace Hopper', 'Nelson Mandela', 'Ravi Kumar', 'Lucy Gray',
    ],
    'LOC': [
        'Paris', 'Berlin', 'New York City', 'United States', 'Hawaii', 'Tokyo', 'Lagos',
        'Buenos Aires', 'Cape Town', 'Oslo', 'South Korea', 'Lima', 'Rio de Janeiro', 'Canada',
        'Madrid', 'Cairo', 'San Francisco', 'Vietnam',
    ],
    'ORG': [
        'Google', 'United Nations', 'Acme Corp', 'Red Cross', 'Boeing', 'Siemens', 'World Bank',
        'Toyota Motor Company', 'Oxfam', 'Interpol', 'Nokia', 'General Electric', 'Unilever',
        'Stanford University', 'Greenpeace', 'Airbus',
    ],
}

# relation: (head type, tail type, predicate tokens)
RELATIONS: Dict[str, Tuple[str, str, List[str]]] = {
    'born_in': ('PER', 'LOC', ['was', 'born', 'in']),
    'works_for': ('PER', 'ORG', ['works', 'for']),
    'president_of': ('PER', 'LOC', ['is', 'the', 'president', 'of']),
    'located_in': ('ORG', 'LOC', ['is', 'based', 'in']),
}

_PREFIXES = [[], [], ['Reports', 'say', 'that'], ['In', '2010', ','], ['According', 'to', 'sources', ',']]

_POS = {
    'was': 'VBD', 'born': 'VBN', 'in': 'IN', 'works': 'VBZ', 'for': 'IN', 'is': 'VBZ', 'the': 'DT',
    'president': 'NN', 'of': 'IN', 'based': 'VBN', 'and': 'CC', ',': ',', '.': '.', 'which': 'WDT',
    'while': 'IN', 'Reports': 'NNS', 'say': 'VBP', 'that': 'IN', 'In': 'IN', '2010': 'CD',
    'According': 'VBG', 'to': 'TO', 'sources': 'NNS',
}


class _SentenceBuilder:
    ''' Accumulates tokens and records the span of every inserted entity '''

    def __init__(self):
        self.tokens: List[str] = []
        self.pos: List[str] = []

    def words(self, words: Sequence[str]) -> None:
        self.tokens.extend(words)
        self.pos.extend(_POS.get(w, 'NN') for w in words)

    def entity(self, name: str, entity_type: str) -> EntitySpan:
        start = len(self.tokens)
        parts = name.split()
        self.tokens.extend(parts)
        self.pos.extend('NNP' for _ in parts)
        return EntitySpan(start=start, end=len(self.tokens) - 1, entity_type=entity_type)


class _EntityDraw:
    ''' Names drawn without replacement so a sentence never repeats an entity '''

    def __init__(self, rng: random.Random):
        self.rng = rng
        self.used: set = set()

    def __call__(self, entity_type: str) -> str:
        name = self.rng.choice([n for n in ENTITY_POOLS[entity_type] if n not in self.used])
        self.used.add(name)
        return name


def _single(b: _SentenceBuilder, draw: _EntityDraw, rng: random.Random) -> List[Triplet]:
    relation = rng.choice(list(RELATIONS))
    head_type, tail_type, predicate = RELATIONS[relation]
    head = b.entity(draw(head_type), head_type)
    b.words(predicate)
    tail = b.entity(draw(tail_type), tail_type)
    return [Triplet(head=head, relation=relation, tail=tail)]


def _shared_head(b: _SentenceBuilder, draw: _EntityDraw, rng: random.Random) -> List[Triplet]:
    relations = rng.sample(['born_in', 'works_for', 'president_of'], rng.choice([2, 3]))
    head = b.entity(draw('PER'), 'PER')
    triplets = []
    for k, relation in enumerate(relations):
        if k > 0:
            b.words(['and'] if k == len(relations) - 1 else [','])
        _, tail_type, predicate = RELATIONS[relation]
        b.words(predicate)
        triplets.append(Triplet(head=head, relation=relation, tail=b.entity(draw(tail_type), tail_type)))
    return triplets


def _chain(b: _SentenceBuilder, draw: _EntityDraw, rng: random.Random) -> List[Triplet]:
    person = b.entity(draw('PER'), 'PER')
    b.words(RELATIONS['works_for'][2])
    org = b.entity(draw('ORG'), 'ORG')
    b.words([',', 'which'] + RELATIONS['located_in'][2])
    place = b.entity(draw('LOC'), 'LOC')
    return [
        Triplet(head=person, relation='works_for', tail=org),
        Triplet(head=org, relation='located_in', tail=place),
    ]


def _independent(b: _SentenceBuilder, draw: _EntityDraw, rng: random.Random) -> List[Triplet]:
    triplets = _single(b, draw, rng)
    b.words([',', 'while'])
    return triplets + _single(b, draw, rng)


_SHAPES = [(_single, 0.30), (_shared_head, 0.35), (_chain, 0.20), (_independent, 0.15)]


def generate_sentence(rng: random.Random, sentence_id: Optional[str] = None) -> AnnotatedSentence:
    ''' One templated sentence with 1 to 3 triplets, no entity-pair overlap and no shared boundaries '''
    builder = _SentenceBuilder()
    builder.words(rng.choice(_PREFIXES))
    shape = rng.choices([s for s, _ in _SHAPES], weights=[w for _, w in _SHAPES])[0]
    triplets = shape(builder, _EntityDraw(rng), rng)
    builder.words(['.'])
    return AnnotatedSentence(
        id=sentence_id,
        sentence={'tokens': builder.tokens, 'pos': builder.pos},
        triplets=triplets,
    )


def generate_corpus(size: int, seed: int = 0, prefix: str = 'syn') -> List[AnnotatedSentence]:
    '''
    Generate a templated corpus over 3 entity types and 4 relation types.

    Args:
        size (int): Number of sentences.
        seed (int): Seed of the generator; equal seeds give equal corpora.
        prefix (str): Sentence id prefix.

    Returns:
        List[AnnotatedSentence]: Sentences with ids "<prefix>-<seed>-<index>".
    '''
    rng = random.Random(seed)
    return [generate_sentence(rng, f"{prefix}-{seed}-{i}") for i in range(size)]


def figure_sentence(sentence_id: str = 'figure') -> AnnotatedSentence:
    ''' Trump is the head of two triplets whose tails are United States and New York City '''
    tokens = ['Trump', ',', 'the', 'President', 'of', 'the', 'United', 'States', ',',
              'was', 'born', 'in', 'New', 'York', 'City', '.']
    pos = ['NNP', ',', 'DT', 'NNP', 'IN', 'DT', 'NNP', 'NNP', ',', 'VBD', 'VBN', 'IN', 'NNP', 'NNP', 'NNP', '.']
    trump = EntitySpan(start=0, end=0, entity_type='PER')
    return AnnotatedSentence(
        id=sentence_id,
        sentence={'tokens': tokens, 'pos': pos},
        triplets=[
            Triplet(head=trump, relation='President_Of', tail=EntitySpan(start=6, end=7, entity_type='LOC')),
            Triplet(head=trump, relation='Born_In', tail=EntitySpan(start=12, end=14, entity_type='LOC')),
        ],
    )
