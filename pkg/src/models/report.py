from typing import Dict, List, Optional
from pydantic import BaseModel, Field, NonNegativeInt, computed_field, model_validator


def _ratio(numerator: int, denominator: int) -> float:
    return numerator / denominator if denominator else 0.0


class ScoreReport(BaseModel):
    ''' Exact-match micro precision/recall/F1 with the underlying counts '''
    gold: NonNegativeInt      = Field(0, description="Gold triplets")
    predicted: NonNegativeInt = Field(0, description="Distinct predicted triplets")
    correct: NonNegativeInt   = Field(0, description="Predicted triplets found in gold")
    breakdown: Optional[Dict[str, "ScoreReport"]] = Field(None, description="Reports per category or bucket")

    @model_validator(mode="after")
    def _validate_counts(self):
        if self.correct > min(self.gold, self.predicted):
            raise ValueError("Correct count exceeds gold or predicted count")
        return self

    @computed_field
    @property
    def precision(self) -> float:
        return _ratio(self.correct, self.predicted)

    @computed_field
    @property
    def recall(self) -> float:
        return _ratio(self.correct, self.gold)

    @computed_field
    @property
    def f1(self) -> float:
        p, r = self.precision, self.recall
        return 2 * p * r / (p + r) if p + r else 0.0

    def __add__(self, other: "ScoreReport") -> "ScoreReport":
        return ScoreReport(
            gold=self.gold + other.gold,
            predicted=self.predicted + other.predicted,
            correct=self.correct + other.correct,
        )

    def as_flat(self, prefix: str = '') -> List[str]:
        ''' key=value lines, breakdown entries prefixed by their key '''
        lines = [
            f"{prefix}precision={self.precision:.3f}",
            f"{prefix}recall={self.recall:.3f}",
            f"{prefix}f1={self.f1:.3f}",
            f"{prefix}gold={self.gold}",
            f"{prefix}predicted={self.predicted}",
            f"{prefix}correct={self.correct}",
        ]
        for key, report in (self.breakdown or {}).items():
            lines.extend(report.as_flat(prefix=f"{prefix}{key}."))
        return lines
