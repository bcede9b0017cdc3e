"""
Semantic axis module
Builds one axis per moral dimension from its virtue and vice word sets

    axis = mean(virtue vectors) - mean(vice vectors)

Out-of-vocabulary lexicon words are left out of the means (not zero-filled)
and the axis is stored unnormalized; scoring only uses its direction.
"""
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterable, List, Mapping, Optional, Tuple, Union

import numpy as np

import config
from models.artifacts import AxisDocument, AxisSetDocument
from models.lexicon import MoralLexicon
from modules.documents import read_document, write_document
from modules.embedding_store import EmbeddingStore
from modules.errors import AxisError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SemanticAxis:
    """Axis vector for one dimension plus the number of words averaged per pole"""
    name: str
    vector: np.ndarray
    virtue_words_used: int
    vice_words_used: int

    def __post_init__(self):
        vector = np.array(self.vector, dtype=np.float64)
        vector.setflags(write=False)
        object.__setattr__(self, "vector", vector)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.vector))


@dataclass(frozen=True)
class AxisSet:
    """Ordered axes (one per lexicon dimension) and optional corpus baselines"""
    axes: Tuple[SemanticAxis, ...]
    embedding_dimension: int
    baselines: Optional[Dict[str, float]] = field(default=None)

    def __post_init__(self):
        object.__setattr__(self, "axes", tuple(self.axes))
        for axis in self.axes:
            if axis.vector.shape != (self.embedding_dimension,):
                raise AxisError(
                    f"axis {axis.name!r} has shape {axis.vector.shape}, "
                    f"expected ({self.embedding_dimension},)",
                    dimension=axis.name,
                )
        if self.baselines is not None:
            object.__setattr__(self, "baselines", dict(self.baselines))

    @property
    def names(self) -> List[str]:
        return [axis.name for axis in self.axes]

    @property
    def matrix(self) -> np.ndarray:
        """Axis vectors stacked row-wise, in axis order"""
        return np.vstack([axis.vector for axis in self.axes])

    def __len__(self) -> int:
        return len(self.axes)

    def get(self, name: str) -> SemanticAxis:
        for axis in self.axes:
            if axis.name == name:
                return axis
        raise KeyError(name)

    def has_baselines(self) -> bool:
        return self.baselines is not None and all(name in self.baselines for name in self.names)

    def with_baselines(self, baselines: Mapping[str, float]) -> "AxisSet":
        """Copy of this set with the given corpus baselines attached"""
        unknown = set(baselines) - set(self.names)
        if unknown:
            raise AxisError(f"baselines given for unknown axes: {', '.join(sorted(unknown))}")
        return AxisSet(self.axes, self.embedding_dimension, {name: float(baselines[name]) for name in self.names if name in baselines})


def _pole_mean(store: EmbeddingStore, words: Iterable[str]) -> Tuple[Optional[np.ndarray], int]:
    """Mean vector of the in-vocabulary words (sorted, so order never matters)"""
    found = sorted({word.lower() for word in words if word.lower() in store})
    if not found:
        return None, 0
    stacked = np.vstack([store.lookup(word) for word in found])
    return stacked.mean(axis=0), len(found)


def build_axis(store: EmbeddingStore, name: str, virtues: Iterable[str], vices: Iterable[str]) -> SemanticAxis:
    """
    Build one semantic axis

    Args:
        store: Embedding store
        name: Dimension name
        virtues: Virtue (positive pole) words
        vices: Vice (negative pole) words

    Returns:
        SemanticAxis whose used-counts reflect in-vocabulary words only

    Raises:
        AxisError: No in-vocabulary virtue or vice words, or an axis whose
            norm falls below config.AXIS_NORM_TOLERANCE
    """
    virtue_mean, virtue_count = _pole_mean(store, virtues)
    if virtue_mean is None:
        raise AxisError(f"dimension {name!r}: no virtue word has a vector", dimension=name)

    vice_mean, vice_count = _pole_mean(store, vices)
    if vice_mean is None:
        raise AxisError(f"dimension {name!r}: no vice word has a vector", dimension=name)

    vector = virtue_mean - vice_mean
    norm = float(np.linalg.norm(vector))
    if norm < config.AXIS_NORM_TOLERANCE:
        raise AxisError(f"dimension {name!r}: degenerate axis (norm {norm:.3e})", dimension=name)

    return SemanticAxis(name=name, vector=vector, virtue_words_used=virtue_count, vice_words_used=vice_count)


def build_axis_set(store: EmbeddingStore, lexicon: MoralLexicon) -> AxisSet:
    """One axis per lexicon dimension, in lexicon order; baselines unset"""
    axes = []
    for dim in lexicon.dimensions:
        axes.append(build_axis(store, dim.name, dim.virtues, dim.vices))
        logger.debug(
            "Axis %s built from %d virtue / %d vice words",
            dim.name, axes[-1].virtue_words_used, axes[-1].vice_words_used,
        )
    return AxisSet(tuple(axes), store.dimension)


def axis_set_to_document(axis_set: AxisSet) -> AxisSetDocument:
    return AxisSetDocument(
        schema_version=config.SCHEMA_VERSION,
        embedding_dimension=axis_set.embedding_dimension,
        axes=[
            AxisDocument(
                name=axis.name,
                vector=[float(x) for x in axis.vector],
                virtue_words_used=axis.virtue_words_used,
                vice_words_used=axis.vice_words_used,
            )
            for axis in axis_set.axes
        ],
        baselines=axis_set.baselines,
    )


def axis_set_from_document(document: AxisSetDocument) -> AxisSet:
    axes = tuple(
        SemanticAxis(
            name=axis.name,
            vector=np.array(axis.vector, dtype=np.float64),
            virtue_words_used=axis.virtue_words_used,
            vice_words_used=axis.vice_words_used,
        )
        for axis in document.axes
    )
    return AxisSet(axes, document.embedding_dimension, document.baselines)


def save_axis_set(axis_set: AxisSet, path: Union[str, Path]) -> None:
    write_document(axis_set_to_document(axis_set), path)


def load_axis_set(path: Union[str, Path]) -> AxisSet:
    return axis_set_from_document(read_document(path, AxisSetDocument))
