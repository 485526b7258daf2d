from typing import Callable, Dict, List, Optional, Tuple
from ..utils.constants import DEFAULT_ENTITY_TYPE, UNKNOWN_POS


def find_span(mention: List[str], tokens: List[str]) -> Optional[Tuple[int, int]]:
    ''' Inclusive offsets of the first exact occurrence of mention in tokens '''
    size = len(mention)
    if size == 0:
        return None
    for i in range(len(tokens) - size + 1):
        if tokens[i:i + size] == mention:
            return (i, i + size - 1)
    return None


def _locate(text: str, tokens: List[str]) -> Tuple[int, int]:
    span = find_span(text.split(), tokens)
    if span is None:
        raise ValueError(f"Mention {text!r} not found in the sentence")
    return span


def _pos_or_unknown(record: dict, tokens: List[str]) -> List[str]:
    pos = record.get('pos')
    return list(pos) if pos is not None else [UNKNOWN_POS] * len(tokens)


def _span(text: str, tokens: List[str], entity_type: str) -> dict:
    start, end = _locate(text, tokens)
    return {'start': start, 'end': end, 'type': entity_type}


def native_record(record: dict) -> dict:
    ''' Native records already follow the corpus schema '''
    if not isinstance(record, dict) or 'tokens' not in record:
        raise ValueError("Record has no 'tokens' field")
    if 'pos' not in record:
        raise ValueError("Record has no 'pos' field; declare every tag as UNK when no tagger is available")
    return record


def nyt_record(record: dict) -> dict:
    '''
    Convert a NYT record ({sentText, entityMentions, relationMentions}) to the native schema.

    Relation mentions labeled "None" are skipped; entity types come from entityMentions.
    '''
    tokens = record['sentText'].split()
    types = {m['text']: m.get('label') or DEFAULT_ENTITY_TYPE for m in record.get('entityMentions', [])}

    triplets = []
    for mention in record.get('relationMentions', []):
        if mention['label'] == 'None':
            continue
        head, tail = mention['em1Text'], mention['em2Text']
        triplets.append({
            'head': _span(head, tokens, types.get(head, DEFAULT_ENTITY_TYPE)),
            'relation': mention['label'],
            'tail': _span(tail, tokens, types.get(tail, DEFAULT_ENTITY_TYPE)),
        })

    converted = {'tokens': tokens, 'pos': _pos_or_unknown(record, tokens), 'triplets': triplets}
    if 'id' in record:
        converted['id'] = str(record['id'])
    return converted


def webnlg_record(record: dict) -> dict:
    ''' Convert a WebNLG record ({text, triple_list}) to the native schema; every entity is typed ENTITY '''
    tokens = record['text'].split()
    triplets = [
        {
            'head': _span(head, tokens, DEFAULT_ENTITY_TYPE),
            'relation': relation,
            'tail': _span(tail, tokens, DEFAULT_ENTITY_TYPE),
        }
        for head, relation, tail in record.get('triple_list', [])
    ]

    converted = {'tokens': tokens, 'pos': _pos_or_unknown(record, tokens), 'triplets': triplets}
    if 'id' in record:
        converted['id'] = str(record['id'])
    return converted


ADAPTERS: Dict[str, Callable[[dict], dict]] = {
    'native': native_record,
    'nyt': nyt_record,
    'webnlg': webnlg_record,
}
