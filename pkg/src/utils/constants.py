OUTSIDE_LABEL = 'O'
BINARY_ENTITY_LABEL = 'ENTITY'
DEFAULT_ENTITY_TYPE = 'ENTITY'
UNKNOWN_POS = 'UNK'

PAD_TOKEN = '<pad>'
UNK_TOKEN = '<unk>'

MAX_TOKEN_CHARS = 25
PROBABILITY_FLOOR = 1e-12

CHECKPOINT_SCHEMA = 'headtail/1'
CHECKPOINT_MANIFEST = 'manifest.json'
CHECKPOINT_WEIGHTS = 'model.pt'
VOCAB_FOLDER = 'vocab'
CORPUS_FILENAME = 'corpus.jsonl'

DATASET_FORMATS = ('native', 'nyt', 'webnlg')
