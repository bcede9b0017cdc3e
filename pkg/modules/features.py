"""
Feature matrix module
Row-labelled numeric feature tables shared by the scorer, the external
feature ingestion and the classifiers
"""
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd


@dataclass(frozen=True)
class FeatureMatrix:
    """
    Feature rows keyed by document id

    means/scales are populated only on a standardized copy (see standardized()).
    """
    ids: Tuple[str, ...]
    values: np.ndarray
    feature_names: Tuple[str, ...]
    means: Optional[np.ndarray] = field(default=None, compare=False)
    scales: Optional[np.ndarray] = field(default=None, compare=False)
    dropped: Tuple[str, ...] = ()

    def __post_init__(self):
        values = np.array(self.values, dtype=np.float64)
        if values.ndim == 1 and len(self.feature_names) == 0:
            values = values.reshape(len(self.ids), 0)
        if values.ndim != 2:
            raise ValueError("feature values must be a 2-D array")
        if values.shape != (len(self.ids), len(self.feature_names)):
            raise ValueError(
                f"values have shape {values.shape}, expected ({len(self.ids)}, {len(self.feature_names)})"
            )
        if len(set(self.ids)) != len(self.ids):
            raise ValueError("row ids must be unique")
        if len(set(self.feature_names)) != len(self.feature_names):
            raise ValueError("feature names must be unique")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "ids", tuple(str(i) for i in self.ids))
        object.__setattr__(self, "feature_names", tuple(self.feature_names))
        object.__setattr__(self, "dropped", tuple(self.dropped))

    @property
    def n_rows(self) -> int:
        return len(self.ids)

    @property
    def n_features(self) -> int:
        return len(self.feature_names)

    def index(self) -> Dict[str, int]:
        return {row_id: i for i, row_id in enumerate(self.ids)}

    def row(self, row_id: str) -> np.ndarray:
        return self.values[self.index()[row_id]]

    def subset(self, ids: Sequence[str]) -> "FeatureMatrix":
        """Rows for the given ids, in the given order (KeyError if one is absent)"""
        lookup = self.index()
        rows = [lookup[row_id] for row_id in ids]
        return FeatureMatrix(tuple(ids), self.values[rows], self.feature_names)

    def concat(self, other: "FeatureMatrix") -> "FeatureMatrix":
        """Columnwise concatenation over the ids both matrices share (left order kept)"""
        clash = set(self.feature_names) & set(other.feature_names)
        if clash:
            raise ValueError(f"feature names collide: {', '.join(sorted(clash))}")
        other_index = other.index()
        shared = [row_id for row_id in self.ids if row_id in other_index]
        left = self.subset(shared).values
        right = other.values[[other_index[row_id] for row_id in shared]]
        return FeatureMatrix(
            tuple(shared),
            np.hstack([left, right]) if shared else np.zeros((0, self.n_features + other.n_features)),
            self.feature_names + other.feature_names,
        )

    def column_statistics(self) -> Tuple[np.ndarray, np.ndarray, List[str]]:
        """
        Column means and population standard deviations

        Zero-variance columns get scale 1.0 and are listed as dropped.
        """
        means = self.values.mean(axis=0)
        stds = self.values.std(axis=0)
        constant = np.ptp(self.values, axis=0) == 0 if self.n_rows else np.ones(self.n_features, dtype=bool)
        scales = np.where(constant, 1.0, stds)
        dropped = [name for name, flag in zip(self.feature_names, constant) if flag]
        return means, scales, dropped

    def standardized(self) -> "FeatureMatrix":
        """Zero-mean / unit-variance copy with means, scales and dropped columns recorded"""
        means, scales, dropped = self.column_statistics()
        return FeatureMatrix(
            self.ids,
            (self.values - means) / scales,
            self.feature_names,
            means=means,
            scales=scales,
            dropped=tuple(dropped),
        )

    def to_frame(self) -> pd.DataFrame:
        frame = pd.DataFrame(self.values, columns=list(self.feature_names))
        frame.insert(0, "id", list(self.ids))
        return frame
