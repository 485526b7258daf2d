from .batching import SentenceBatch, TaggingTargets, TrainingBatch, stack_targets, tensorize
from .encoder import CharCNN, EncodedBatch, PackedBiLSTM, SentenceEncoder, masked_max
from .hbt import HBTInput, HierarchicalBoundaryTagger, TaggerOutput
from .extractors import (HeadEntityContext, HeadEntityExtractor, HeadRelativePositionEmbedding,
                         TailRelationExtractor, build_he_features, head_context)
from .model import JointExtractor, JointLoss
