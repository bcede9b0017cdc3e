"""
Experiment Models
Pydantic models for experiment configuration (paths, splits, classifier settings)
"""
from enum import Enum
from pathlib import Path
from pydantic import BaseModel, Field, field_validator
from typing import Dict, List, Optional

import config


class FeatureMode(str, Enum):
    """Feature family fed to a classifier"""
    FRAME_AXIS = "frame_axis"
    EXTERNAL = "external"
    COMBINED = "combined"


class SplitSpec(BaseModel):
    train_fraction: float = Field(default=config.DEFAULT_TRAIN_FRACTION, gt=0, lt=1)
    seed: int = config.DEFAULT_SEED

    def with_seed(self, seed: int) -> 'SplitSpec':
        return SplitSpec(train_fraction=self.train_fraction, seed=seed)


class ClassifierConfig(BaseModel):
    """Full-batch gradient descent settings"""
    l2_strength: float = Field(default=config.DEFAULT_L2_STRENGTH, gt=0)
    learning_rate: float = Field(default=config.DEFAULT_LEARNING_RATE, gt=0)
    max_iterations: int = Field(default=config.DEFAULT_MAX_ITERATIONS, gt=0)
    tolerance: float = Field(default=config.DEFAULT_TOLERANCE, gt=0)


class CorpusColumns(BaseModel):
    """Column names in a headline / plain corpus CSV"""
    id: str = "id"
    text: str = "title"
    source: str = "publication"


class AnnotationColumns(BaseModel):
    """
    Column names in an annotation file

    When vote_columns is None every column other than id, text and
    annotator_count holds per-dimension vote counts.
    """
    id: str = "id"
    text: str = "text"
    annotator_count: str = "annotator_count"
    vote_columns: Optional[List[str]] = None


class ExperimentConfig(BaseModel):
    """
    Everything one CLI run needs

    Paths are checked for existence at validation time, so a config naming a
    missing file fails before any work starts.
    """
    embeddings: Optional[Path] = None
    lexicon: Optional[Path] = None
    corpus: Optional[Path] = None
    annotations: Optional[Path] = None
    features: Optional[Path] = None
    headline_features: Optional[Path] = None
    leanings: Path = config.DEFAULT_LEANINGS_PATH
    topics: Optional[Path] = config.DEFAULT_TOPICS_PATH
    label_groups: Optional[Path] = None
    axes: Optional[Path] = None
    artifacts: Optional[Path] = None
    out: Path = Path("out")

    # Inline overrides of the topic / leaning files
    topic_keywords: Optional[Dict[str, List[str]]] = None
    source_leanings: Optional[Dict[str, str]] = None

    mode: Optional[FeatureMode] = None
    split: SplitSpec = Field(default_factory=SplitSpec)
    classifier: ClassifierConfig = Field(default_factory=ClassifierConfig)
    corpus_columns: CorpusColumns = Field(default_factory=CorpusColumns)
    annotation_columns: AnnotationColumns = Field(default_factory=AnnotationColumns)
    splits: int = Field(default=config.DEFAULT_SPLITS, ge=1)
    min_votes: int = Field(default=config.DEFAULT_MIN_VOTES, ge=1)
    min_annotators: int = Field(default=config.DEFAULT_MIN_ANNOTATORS, ge=1)
    ci_level: float = Field(default=config.DEFAULT_CI_LEVEL, gt=0, lt=1)
    workers: int = Field(default=config.WORKERS, ge=1)

    @field_validator(
        'embeddings', 'lexicon', 'corpus', 'annotations', 'features',
        'headline_features', 'leanings', 'topics', 'label_groups', 'axes', 'artifacts',
    )
    @classmethod
    def path_exists(cls, v: Optional[Path]) -> Optional[Path]:
        """Referenced inputs must exist"""
        if v is not None and not Path(v).exists():
            raise ValueError(f'{v} does not exist')
        return v

    @field_validator('source_leanings')
    @classmethod
    def validate_leanings(cls, v: Optional[Dict[str, str]]) -> Optional[Dict[str, str]]:
        """Leanings are liberal, conservative or center"""
        if v is None:
            return v
        allowed = {'liberal', 'conservative', 'center'}
        bad = sorted(source for source, leaning in v.items() if leaning.lower() not in allowed)
        if bad:
            raise ValueError(f'unknown leaning for sources: {", ".join(bad)}')
        return {source: leaning.lower() for source, leaning in v.items()}

    @property
    def seeds(self) -> List[int]:
        """Seeds of the repeated splits, in evaluation order"""
        return [self.split.seed + i for i in range(self.splits)]
