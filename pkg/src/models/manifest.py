from datetime import datetime, timezone
from typing import Dict, Optional
from pydantic import BaseModel, Field, NonNegativeInt
from .config import TrainConfig
from ..utils.constants import CHECKPOINT_SCHEMA


def _now() -> str:
    return datetime.now(timezone.utc).isoformat()


class RunManifest(BaseModel):
    ''' Record of one CLI invocation '''
    subcommand: str                  = Field(description="Subcommand name")
    config: Dict[str, object]        = Field(default_factory=dict, description="Config snapshot")
    seed: Optional[int]              = Field(None, description="Seed used by the run")
    fingerprints: Dict[str, Optional[str]] = Field(default_factory=dict, description="SHA-256 of every input file")
    artifacts: Dict[str, str]        = Field(default_factory=dict, description="Output paths")
    started_at: str                  = Field(default_factory=_now)
    duration_seconds: float          = Field(0.0, ge=0.0)


class CheckpointManifest(BaseModel):
    ''' manifest.json of a checkpoint directory '''
    schema_id: str           = Field(CHECKPOINT_SCHEMA, description="Checkpoint layout version")
    config: TrainConfig      = Field(description="Config the model was trained with")
    dev_f1: float            = Field(ge=0.0, le=1.0, description="Dev F1 at save time")
    global_step: NonNegativeInt = Field(description="Optimizer steps at save time")
    epoch: NonNegativeInt    = Field(0, description="Epoch at save time")
    created_at: str          = Field(default_factory=_now)
