"""
Report Models
Classification metrics as reported per dimension / topic / feature mode
"""
from pydantic import BaseModel, Field, FiniteFloat, model_validator


class MetricsReport(BaseModel):
    """
    Binary classification metrics

    precision/recall/f1 are support-weighted over the two classes;
    accuracy is plain. Confusion counts are summed when reports are averaged.
    """
    precision: FiniteFloat = Field(ge=0, le=1)
    recall: FiniteFloat = Field(ge=0, le=1)
    f1: FiniteFloat = Field(ge=0, le=1)
    accuracy: FiniteFloat = Field(ge=0, le=1)
    true_positives: int = Field(ge=0)
    false_positives: int = Field(ge=0)
    true_negatives: int = Field(ge=0)
    false_negatives: int = Field(ge=0)
    averaging: str = 'weighted'
    splits: int = Field(default=1, ge=1)

    @property
    def total(self) -> int:
        return self.true_positives + self.false_positives + self.true_negatives + self.false_negatives

    @model_validator(mode='after')
    def counts_present(self) -> 'MetricsReport':
        if self.total == 0:
            raise ValueError('metrics need at least one prediction')
        return self

    def as_row(self) -> dict:
        return {
            'precision': self.precision,
            'recall': self.recall,
            'f1': self.f1,
            'accuracy': self.accuracy,
            'tp': self.true_positives,
            'fp': self.false_positives,
            'tn': self.true_negatives,
            'fn': self.false_negatives,
            'splits': self.splits,
        }
