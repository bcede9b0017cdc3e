"""
Evaluation module
Seeded train/test splits, weighted classification metrics, repeated-split
runs and Pearson correlation matrices
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Mapping, Optional, Sequence, Tuple, TypeVar

import numpy as np
import pandas as pd
from sklearn.metrics import confusion_matrix, precision_recall_fscore_support

import config
from models.experiment import SplitSpec
from models.reports import MetricsReport
from modules.errors import DataError

logger = logging.getLogger(__name__)

ResultT = TypeVar("ResultT")

# Written in CSV cells where a correlation is undefined
NULL_MARKER = "null"


def split(ids: Sequence[str], spec: SplitSpec) -> Tuple[List[str], List[str]]:
    """
    Deterministic shuffle-and-cut

    Train size is round(train_fraction * n), rounding halves up.

    Raises:
        DataError: Fewer than 2 ids or an empty side
    """
    n = len(ids)
    if n < 2:
        raise DataError(f"need at least 2 ids to split, got {n}")
    n_train = math.floor(spec.train_fraction * n + 0.5)
    if n_train == 0 or n_train == n:
        raise DataError(
            f"train fraction {spec.train_fraction} leaves an empty side for {n} ids"
        )
    order = np.random.default_rng(spec.seed).permutation(n)
    shuffled = [ids[i] for i in order]
    return shuffled[:n_train], shuffled[n_train:]


def metrics(predicted: Sequence[int], truth: Sequence[int]) -> MetricsReport:
    """
    Confusion counts, support-weighted precision/recall/F1 and accuracy

    Raises:
        DataError: Length mismatch or empty input
    """
    if len(predicted) != len(truth):
        raise DataError(f"{len(predicted)} predictions for {len(truth)} labels")
    if len(truth) == 0:
        raise DataError("cannot compute metrics on zero predictions")

    y_pred = np.asarray(predicted, dtype=int)
    y_true = np.asarray(truth, dtype=int)
    precision, recall, f1, _ = precision_recall_fscore_support(
        y_true, y_pred, labels=[0, 1], average="weighted", zero_division=0
    )
    tn, fp, fn, tp = confusion_matrix(y_true, y_pred, labels=[0, 1]).ravel()
    return MetricsReport(
        precision=float(precision),
        recall=float(recall),
        f1=float(f1),
        accuracy=float(tp + tn) / len(y_true),
        true_positives=int(tp),
        false_positives=int(fp),
        true_negatives=int(tn),
        false_negatives=int(fn),
    )


def mean_metrics(reports: Sequence[MetricsReport]) -> MetricsReport:
    """Mean of the rates over splits; confusion counts summed"""
    if not reports:
        raise DataError("no metrics to average")
    return MetricsReport(
        precision=float(np.mean([r.precision for r in reports])),
        recall=float(np.mean([r.recall for r in reports])),
        f1=float(np.mean([r.f1 for r in reports])),
        accuracy=float(np.mean([r.accuracy for r in reports])),
        true_positives=sum(r.true_positives for r in reports),
        false_positives=sum(r.false_positives for r in reports),
        true_negatives=sum(r.true_negatives for r in reports),
        false_negatives=sum(r.false_negatives for r in reports),
        averaging=reports[0].averaging,
        splits=sum(r.splits for r in reports),
    )


def repeated_split_evaluation(
    ids: Sequence[str],
    n_splits: int,
    spec: SplitSpec,
    evaluate: Callable[[List[str], List[str], int], ResultT],
    workers: int = config.WORKERS,
) -> List[ResultT]:
    """
    Run evaluate(train_ids, test_ids, seed) on seeds spec.seed, spec.seed + 1, ...

    Splits run concurrently; results come back in seed order.
    """
    if n_splits < 1:
        raise ValueError("n_splits must be >= 1")
    seeds = [spec.seed + i for i in range(n_splits)]
    partitions = [split(ids, spec.with_seed(seed)) for seed in seeds]
    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        futures = [pool.submit(evaluate, train, test, seed) for (train, test), seed in zip(partitions, seeds)]
        return [future.result() for future in futures]


@dataclass(frozen=True)
class CorrelationMatrix:
    """Pearson matrix; NaN marks an undefined cell (zero-variance column)"""
    labels: Tuple[str, ...]
    matrix: np.ndarray

    def defined(self, i: int, j: int) -> bool:
        return not math.isnan(self.matrix[i, j])

    def value(self, a: str, b: str) -> Optional[float]:
        cell = self.matrix[self.labels.index(a), self.labels.index(b)]
        return None if math.isnan(cell) else float(cell)

    def to_frame(self) -> pd.DataFrame:
        """Label-indexed frame with undefined cells as the null marker"""
        frame = pd.DataFrame(self.matrix, index=list(self.labels), columns=list(self.labels), dtype=object)
        return frame.where(~np.isnan(self.matrix), NULL_MARKER)

    def to_document(self) -> Dict[str, Any]:
        return {
            "labels": list(self.labels),
            "matrix": [
                [None if math.isnan(cell) else float(cell) for cell in row]
                for row in self.matrix
            ],
        }


def correlation_matrix(columns: Mapping[str, Sequence[float]]) -> CorrelationMatrix:
    """
    Pairwise Pearson correlation between named columns

    Zero-variance columns give undefined cells (including their diagonal).

    Raises:
        DataError: Unequal lengths or fewer than 2 rows
    """
    labels = tuple(columns)
    lengths = {len(columns[label]) for label in labels}
    if len(lengths) > 1:
        raise DataError(f"columns have different lengths: {sorted(lengths)}")
    if not labels or lengths.pop() < 2:
        raise DataError("correlation needs at least one column of 2 or more values")

    frame = pd.DataFrame({label: np.asarray(columns[label], dtype=np.float64) for label in labels}, columns=list(labels))
    matrix = frame.corr(method="pearson").to_numpy(dtype=np.float64, copy=True)
    constant = (frame.max() - frame.min()).to_numpy() == 0

    # zero-variance columns are undefined everywhere, diagonal included
    matrix[constant, :] = np.nan
    matrix[:, constant] = np.nan
    np.fill_diagonal(matrix, np.where(constant, np.nan, 1.0))
    matrix = np.clip(matrix, -1.0, 1.0)

    undefined = [label for label, flag in zip(labels, constant) if flag]
    if undefined:
        logger.warning("zero-variance columns, correlations undefined: %s", ", ".join(undefined))
    return CorrelationMatrix(labels, matrix)
