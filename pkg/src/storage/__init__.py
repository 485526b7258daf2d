from .corpus_store import CorpusStore, read_records, write_sentences
from .embeddings import load_pretrained_vectors
from .checkpoint_store import Checkpoint, load_checkpoint, read_manifest, save_checkpoint
