"""
Error types for the moral framing toolkit

Every failure the library reports on purpose is a MoralFramesError.
The CLI maps these to exit code 2 (data error).
"""
from typing import List, Optional


class MoralFramesError(Exception):
    """Base class for all domain errors"""
    pass


class EmbeddingLoadError(MoralFramesError):
    """Word-vector file could not be read or holds no usable vectors"""
    pass


class LexiconError(MoralFramesError):
    """Lexicon file is malformed or violates a lexicon invariant"""
    pass


class AxisError(MoralFramesError):
    """Semantic axis cannot be built (no in-vocabulary words, degenerate axis)"""

    def __init__(self, message: str, dimension: Optional[str] = None):
        super().__init__(message)
        self.dimension = dimension


class ScoringError(MoralFramesError):
    """Document or corpus cannot be scored"""
    pass


class MissingBaselineError(ScoringError):
    """Intensity requested for an axis without a corpus baseline"""
    pass


class TrainingError(MoralFramesError):
    """Classifier training failed (single-class labels, non-finite data, divergence)"""

    def __init__(self, message: str, dimension: Optional[str] = None):
        super().__init__(message)
        self.dimension = dimension


class SingularInformationError(TrainingError):
    """Observed information matrix is singular; carries the offending columns"""

    def __init__(self, columns: List[str]):
        super().__init__(
            f"Information matrix is singular; columns involved: {', '.join(columns)}"
        )
        self.columns = columns


class DataError(MoralFramesError):
    """Input dataset is malformed or empty after filtering"""
    pass


class ModeUnavailableError(DataError):
    """Requested feature mode lacks the inputs it needs"""
    pass


class ArtifactError(MoralFramesError):
    """Saved artifacts cannot be written or read back"""
    pass


class SchemaVersionError(ArtifactError):
    """Saved artifact was written with a different schema version"""

    def __init__(self, path: str, found: Optional[int], expected: int):
        super().__init__(
            f"{path}: schema version {found} does not match supported version {expected}"
        )
        self.found = found
        self.expected = expected
