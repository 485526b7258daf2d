from .sentence import AnnotatedSentence, CountBucket, EntitySpan, SentenceCategory, TokenSequence, Triplet
from .tagging import BoundaryTagging, StartDistanceSequence, TagSpace, TypedSpan
from .vocabulary import CorpusVocabularies, LabelVocabulary, TagVocabulary
from .config import HeadDistanceAnchor, TokenFeatureConfig, TrainConfig
from .report import ScoreReport
from .manifest import CheckpointManifest, RunManifest
from .extraction import ExtractionResult, HeadExtraction, TailMention
