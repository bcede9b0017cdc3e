"""
Artifact Models
Pydantic models for persisted axis sets, trained classifiers and run manifests

Floats are written with the shortest repr that round-trips, so a saved model
reproduces its predictions bit-for-bit. Non-finite values are rejected on load.
"""
from pydantic import BaseModel, Field, FiniteFloat, model_validator
from typing import Any, Dict, List, Literal, Optional


class AxisDocument(BaseModel):
    name: str
    vector: List[FiniteFloat]
    virtue_words_used: int = Field(ge=1)
    vice_words_used: int = Field(ge=1)


class AxisSetDocument(BaseModel):
    """Semantic axes plus optional per-axis corpus baselines"""
    schema_version: int
    kind: Literal['axis_set'] = 'axis_set'
    embedding_dimension: int = Field(ge=1)
    axes: List[AxisDocument]
    baselines: Optional[Dict[str, FiniteFloat]] = None

    @model_validator(mode='after')
    def axes_consistent(self) -> 'AxisSetDocument':
        """Vectors share the embedding dimension; baselines name known axes"""
        names = [axis.name for axis in self.axes]
        if len(set(names)) != len(names):
            raise ValueError('axis names must be unique')
        for axis in self.axes:
            if len(axis.vector) != self.embedding_dimension:
                raise ValueError(
                    f'axis {axis.name!r} has {len(axis.vector)} components, '
                    f'expected {self.embedding_dimension}'
                )
        if self.baselines is not None:
            unknown = sorted(set(self.baselines) - set(names))
            if unknown:
                raise ValueError(f'baselines for unknown axes: {", ".join(unknown)}')
        return self


class TrainingMetadata(BaseModel):
    n_samples: int
    positive_rate: float
    iterations: int
    final_loss: FiniteFloat
    l2_strength: FiniteFloat
    learning_rate: FiniteFloat
    final_learning_rate: FiniteFloat
    tolerance: FiniteFloat
    converged: bool
    stop_reason: str


class CoefficientInterval(BaseModel):
    """Wald interval for one weight; None bounds when the column was not estimated"""
    feature: str
    estimate: FiniteFloat
    std_error: Optional[FiniteFloat] = None
    low: Optional[FiniteFloat] = None
    high: Optional[FiniteFloat] = None
    significant: Optional[bool] = None
    level: FiniteFloat = 0.95


class LogisticModelDocument(BaseModel):
    """One binary logistic regression model"""
    schema_version: int
    kind: Literal['logistic_model'] = 'logistic_model'
    target: str
    feature_names: List[str]
    weights: List[FiniteFloat]
    intercept: FiniteFloat
    means: List[FiniteFloat]
    scales: List[FiniteFloat]
    dropped_features: List[str] = []
    training: TrainingMetadata
    intervals: Optional[List[CoefficientInterval]] = None

    @model_validator(mode='after')
    def lengths_match(self) -> 'LogisticModelDocument':
        """Weights and standardization parameters align with feature names"""
        n = len(self.feature_names)
        for field_name in ('weights', 'means', 'scales'):
            if len(getattr(self, field_name)) != n:
                raise ValueError(f'{field_name} must have {n} entries')
        if any(scale <= 0 for scale in self.scales):
            raise ValueError('scales must be positive')
        return self


class RunManifest(BaseModel):
    """Echo of one CLI run: config, seeds, row counts, versions"""
    command: str
    project: str
    version: str
    schema_version: int
    library_versions: Dict[str, str]
    config: Dict[str, Any]
    seeds: List[int]
    row_counts: Dict[str, Any]
    outputs: List[str] = []
    notes: List[str] = []


class ArtifactIndex(BaseModel):
    """Index of a saved moral-foundation model set (one model file per dimension)"""
    schema_version: int
    kind: Literal['mf_artifacts'] = 'mf_artifacts'
    mode: str
    dimensions: List[str]
    axes_file: Optional[str] = None
    model_files: Dict[str, str]

    @model_validator(mode='after')
    def files_cover_dimensions(self) -> 'ArtifactIndex':
        missing = [d for d in self.dimensions if d not in self.model_files]
        if missing:
            raise ValueError(f'no model file for dimensions: {", ".join(missing)}')
        if self.mode in ('frame_axis', 'combined') and self.axes_file is None:
            raise ValueError(f'mode {self.mode} needs an axes file')
        return self
