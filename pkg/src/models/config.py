from enum import Enum
from typing import Dict, Optional
from pydantic import BaseModel, ConfigDict, Field, PositiveFloat, PositiveInt, NonNegativeInt


class HeadDistanceAnchor(str, Enum):
    ''' Token of the head entity the relative-position feature is measured from '''
    START = "start"
    END = "end"


class TokenFeatureConfig(BaseModel):
    ''' Dimensions of the shared encoder and the taggers '''
    model_config = ConfigDict(frozen=True)

    word_dim: PositiveInt         = Field(300, description="Word embedding size")
    char_emb_dim: PositiveInt     = Field(30, description="Character embedding size")
    char_cnn_window: PositiveInt  = Field(3, description="Character CNN window")
    char_cnn_filters: PositiveInt = Field(50, description="Character CNN filters")
    pos_dim: PositiveInt          = Field(30, description="POS embedding size")
    hidden_dim: PositiveInt       = Field(100, description="Recurrent hidden size per direction")
    position_dim: PositiveInt     = Field(30, description="Start-distance and head-distance embedding size")


class TrainConfig(BaseModel):
    ''' Optimization schedule, model options and ablation switches '''
    model_config = ConfigDict(frozen=True)

    features: TokenFeatureConfig = Field(default_factory=TokenFeatureConfig)

    learning_rate: PositiveFloat  = Field(0.001, description="Adam learning rate")
    batch_size: PositiveInt       = Field(64, description="Sentences per batch")
    dropout: float                = Field(0.4, ge=0.0, lt=1.0, description="Dropout on embeddings and hidden states")
    grad_clip_norm: PositiveFloat = Field(5.0, description="Global gradient norm clip")
    max_epochs: PositiveInt       = Field(100, description="Maximum number of training epochs")
    patience: NonNegativeInt      = Field(10, description="Non-improving epochs tolerated before stopping")
    seed: NonNegativeInt          = Field(13, description="Seed for every random generator")

    max_sentence_length: PositiveInt          = Field(100, description="Distance constant C and head-distance clip")
    head_distance_anchor: HeadDistanceAnchor  = Field(HeadDistanceAnchor.START)
    min_token_freq: PositiveInt               = Field(1, description="Word vocabulary frequency cutoff")
    lowercase_tokens: bool                    = Field(False)
    pretrained_vectors: Optional[str]         = Field(None, description="GloVe-format text file")
    freeze_word_embeddings: bool              = Field(False)

    repeat_heads: bool       = Field(False, description="One training instance per gold head")
    negative_heads: bool     = Field(False, description="Add predicted non-gold heads with all-O TER targets")
    no_char: bool            = Field(False, description="Drop the character CNN")
    no_pht: bool             = Field(False, description="Drop the head-relative position embedding")
    no_hierarchy: bool       = Field(False, description="Predict end tags from the start layer")
    binary_head_types: bool  = Field(False, description="Tag heads as ENTITY instead of their type")
    pipeline_mode: bool      = Field(False, description="Separate encoders for HE and TER")

    @classmethod
    def from_flat(cls, values: Dict[str, Optional[str]], **overrides) -> "TrainConfig":
        '''
        Build a config from a flat key-value mapping.

        Keys are field names of TrainConfig or TokenFeatureConfig, case-insensitive.

        Args:
            values (Dict[str, Optional[str]]): Raw values, as read from a KEY=value file.
            **overrides: Values taking precedence over the mapping.

        Returns:
            TrainConfig: The validated config.

        Raises:
            ValueError: If a key matches no field.
        '''
        feature_fields = set(TokenFeatureConfig.model_fields)
        train_fields = set(cls.model_fields) - {'features'}
        features: Dict[str, object] = {}
        settings: Dict[str, object] = {}

        for raw_key, value in {**values, **overrides}.items():
            key = raw_key.strip().lower()
            if value is None or value == '':
                continue
            if key in feature_fields:
                features[key] = value
            elif key in train_fields:
                settings[key] = value
            else:
                raise ValueError(f"Unknown config key: {raw_key}")

        return cls(features=TokenFeatureConfig(**features), **settings)

    def as_flat(self) -> Dict[str, object]:
        ''' Inverse of from_flat '''
        flat = self.model_dump(mode='json', exclude={'features'})
        flat.update(self.features.model_dump(mode='json'))
        return flat
