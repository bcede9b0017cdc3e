"""
Classifier module
Binary logistic regression trained by full-batch gradient descent,
one-vs-rest wrappers, Wald coefficient intervals and the
frequency-distribution baseline

Objective on standardized features X (n rows), labels y, weights w, intercept b:
    J(w, b) = (1/n) * [ sum log(1 + exp(z)) - y*z  +  (l2/2) * ||w||^2 ],  z = Xw + b
The intercept is not penalized.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.special import expit
from scipy.stats import norm

import config
from models.artifacts import CoefficientInterval, LogisticModelDocument, TrainingMetadata
from models.experiment import ClassifierConfig
from modules.documents import read_document, write_document
from modules.errors import SingularInformationError, TrainingError
from modules.features import FeatureMatrix

logger = logging.getLogger(__name__)

# Learning-rate floor; halving below this ends training
MIN_LEARNING_RATE = 1e-12

# Relative eigenvalue cutoff for a singular information matrix
SINGULAR_TOLERANCE = 1e-10

# Open-interval bounds for predicted probabilities
PROBABILITY_FLOOR = float(np.nextafter(0.0, 1.0))
PROBABILITY_CEILING = float(np.nextafter(1.0, 0.0))


@dataclass(frozen=True)
class LogisticModel:
    """Trained binary model; weights are over standardized features"""
    target: str
    feature_names: Tuple[str, ...]
    weights: np.ndarray
    intercept: float
    means: np.ndarray
    scales: np.ndarray
    dropped_features: Tuple[str, ...]
    training: TrainingMetadata
    intervals: Optional[Tuple[CoefficientInterval, ...]] = None

    def __post_init__(self):
        for name in ("weights", "means", "scales"):
            array = np.array(getattr(self, name), dtype=np.float64)
            if array.shape != (len(self.feature_names),):
                raise ValueError(f"{name} must have {len(self.feature_names)} entries")
            if not np.all(np.isfinite(array)):
                raise ValueError(f"{name} must be finite")
            array.setflags(write=False)
            object.__setattr__(self, name, array)
        if not np.isfinite(self.intercept):
            raise ValueError("intercept must be finite")
        object.__setattr__(self, "feature_names", tuple(self.feature_names))
        object.__setattr__(self, "dropped_features", tuple(self.dropped_features))

    def standardize(self, values: np.ndarray) -> np.ndarray:
        return (values - self.means) / self.scales

    def decision(self, values: np.ndarray) -> np.ndarray:
        """Linear score for a row matrix of raw features"""
        return self.standardize(values) @ self.weights + self.intercept

    def predict_proba_matrix(self, values: np.ndarray) -> np.ndarray:
        values = np.asarray(values, dtype=np.float64)
        if values.ndim != 2 or values.shape[1] != len(self.feature_names):
            raise ValueError(
                f"expected rows of {len(self.feature_names)} features, got shape {values.shape}"
            )
        if not np.all(np.isfinite(values)):
            raise ValueError("feature values must be finite")
        # probabilities stay strictly inside (0, 1) even when expit saturates
        return np.clip(expit(self.decision(values)), PROBABILITY_FLOOR, PROBABILITY_CEILING)


@dataclass(frozen=True)
class BaselineModel:
    """Predicts 1 with the training-set positive rate, independently per row"""
    positive_rate: float
    seed: int


def logistic_objective(
    weights: np.ndarray, intercept: float, X: np.ndarray, y: np.ndarray, l2_strength: float
) -> Tuple[float, np.ndarray, float]:
    """
    Regularized mean negative log-likelihood and its gradient

    Returns:
        (loss, gradient w.r.t. weights, gradient w.r.t. intercept)
    """
    n = X.shape[0]
    z = X @ weights + intercept
    nll = np.sum(np.logaddexp(0.0, z) - y * z)
    loss = (nll + 0.5 * l2_strength * float(weights @ weights)) / n
    residual = expit(z) - y
    grad_w = (X.T @ residual + l2_strength * weights) / n
    grad_b = float(residual.sum()) / n
    return float(loss), grad_w, grad_b


def _check_labels(y: Sequence[int], n_rows: int) -> np.ndarray:
    labels = np.asarray(y)
    if labels.shape != (n_rows,):
        raise TrainingError(f"expected {n_rows} labels, got {labels.shape[0] if labels.ndim else 0}")
    if not np.all(np.isin(labels, (0, 1))):
        raise TrainingError("labels must be 0 or 1")
    labels = labels.astype(np.float64)
    if labels.min() == labels.max():
        raise TrainingError(f"labels contain a single class ({int(labels[0])})")
    return labels


def train_logistic(
    X: FeatureMatrix,
    y: Sequence[int],
    settings: Optional[ClassifierConfig] = None,
    target: str = "label",
) -> LogisticModel:
    """
    Train one binary logistic regression

    Args:
        X: Training features (raw; standardized internally)
        y: 0/1 labels aligned with X rows
        settings: Optimizer settings (defaults from config)
        target: Name recorded on the model

    Returns:
        LogisticModel; zero-variance columns keep weight 0 and are listed
        in dropped_features

    Raises:
        TrainingError: Single-class labels, non-finite features, divergence
    """
    settings = settings or ClassifierConfig()
    labels = _check_labels(y, X.n_rows)
    if not np.all(np.isfinite(X.values)):
        raise TrainingError("feature values must be finite")

    standardized = X.standardized()
    active = np.array([name not in standardized.dropped for name in X.feature_names], dtype=bool)
    if standardized.dropped:
        logger.info("%s: zero-variance columns held at 0: %s", target, ", ".join(standardized.dropped))
    Xs = standardized.values[:, active]

    positive_rate = float(labels.mean())
    w = np.zeros(Xs.shape[1])
    b = float(np.log(positive_rate / (1.0 - positive_rate)))
    lr = settings.learning_rate

    loss, grad_w, grad_b = logistic_objective(w, b, Xs, labels, settings.l2_strength)
    if not np.isfinite(loss):
        raise TrainingError(f"{target}: initial loss is not finite", dimension=target)

    iterations = 0
    stop_reason = "max_iterations"
    while iterations < settings.max_iterations:
        if max(np.max(np.abs(grad_w), initial=0.0), abs(grad_b)) < settings.tolerance:
            stop_reason = "gradient_tolerance"
            break

        candidate_finite = True
        while True:
            w_new = w - lr * grad_w
            b_new = b - lr * grad_b
            loss_new, grad_w_new, grad_b_new = logistic_objective(
                w_new, b_new, Xs, labels, settings.l2_strength
            )
            candidate_finite = bool(np.isfinite(loss_new))
            if candidate_finite and loss_new <= loss:
                break
            lr /= 2.0
            if lr < MIN_LEARNING_RATE:
                break

        if lr < MIN_LEARNING_RATE:
            if not candidate_finite:
                raise TrainingError(f"{target}: loss diverged", dimension=target)
            stop_reason = "step_underflow"
            break

        w, b = w_new, b_new
        loss, grad_w, grad_b = loss_new, grad_w_new, grad_b_new
        iterations += 1
    else:
        if max(np.max(np.abs(grad_w), initial=0.0), abs(grad_b)) < settings.tolerance:
            stop_reason = "gradient_tolerance"

    converged = stop_reason == "gradient_tolerance"
    if not converged:
        logger.warning("%s: training stopped by %s after %d iterations", target, stop_reason, iterations)

    weights = np.zeros(X.n_features)
    weights[active] = w
    return LogisticModel(
        target=target,
        feature_names=X.feature_names,
        weights=weights,
        intercept=b,
        means=standardized.means,
        scales=standardized.scales,
        dropped_features=standardized.dropped,
        training=TrainingMetadata(
            n_samples=X.n_rows,
            positive_rate=positive_rate,
            iterations=iterations,
            final_loss=loss,
            l2_strength=settings.l2_strength,
            learning_rate=settings.learning_rate,
            final_learning_rate=lr,
            tolerance=settings.tolerance,
            converged=converged,
            stop_reason=stop_reason,
        ),
    )


def predict_proba(model: LogisticModel, x: Sequence[float]) -> float:
    """
    Probability of class 1 for one raw feature vector

    Raises:
        ValueError: Length mismatch or non-finite input
    """
    row = np.asarray(x, dtype=np.float64)
    if row.shape != (len(model.feature_names),):
        raise ValueError(f"expected {len(model.feature_names)} features, got {row.shape}")
    return float(model.predict_proba_matrix(row[None, :])[0])


def predict_label(model: LogisticModel, x: Sequence[float], threshold: float = config.DECISION_THRESHOLD) -> int:
    """1 iff predict_proba >= threshold"""
    return int(predict_proba(model, x) >= threshold)


def predict_labels(model: LogisticModel, X: FeatureMatrix, threshold: float = config.DECISION_THRESHOLD) -> np.ndarray:
    return (model.predict_proba_matrix(X.values) >= threshold).astype(int)


def coefficient_intervals(
    model: LogisticModel,
    X: FeatureMatrix,
    y: Sequence[int],
    level: float = config.DEFAULT_CI_LEVEL,
) -> List[CoefficientInterval]:
    """
    Wald intervals for every weight (intercept excluded)

    The covariance is the inverse of the regularized observed information
    X~' W X~ + diag(0, l2, ..., l2), with X~ = [1, standardized active columns]
    and W = diag(p(1-p)) at the fitted weights.

    Raises:
        SingularInformationError: Information matrix is (numerically) singular
    """
    if not 0 < level < 1:
        raise ValueError("level must be in (0, 1)")
    _check_labels(y, X.n_rows)
    if tuple(X.feature_names) != model.feature_names:
        raise TrainingError("feature names differ from the model's")

    active_names = [name for name in model.feature_names if name not in model.dropped_features]
    active = np.array([name not in model.dropped_features for name in model.feature_names], dtype=bool)
    Xs = model.standardize(X.values)[:, active]
    design = np.hstack([np.ones((X.n_rows, 1)), Xs])
    coefficients = np.concatenate([[model.intercept], model.weights[active]])

    p = expit(design @ coefficients)
    information = design.T @ (design * (p * (1.0 - p))[:, None])
    information[np.diag_indices_from(information)] += np.concatenate(
        [[0.0], np.full(len(active_names), model.training.l2_strength)]
    )

    eigenvalues, eigenvectors = np.linalg.eigh(information)
    cutoff = SINGULAR_TOLERANCE * max(float(np.max(np.abs(eigenvalues))), 1.0)
    null_directions = eigenvectors[:, eigenvalues <= cutoff]
    if null_directions.size:
        names = ["(intercept)"] + active_names
        involved = np.any(np.abs(null_directions) > 1e-8, axis=1)
        raise SingularInformationError([name for name, flag in zip(names, involved) if flag])

    covariance = np.linalg.inv(information)
    std_errors = np.sqrt(np.clip(np.diag(covariance)[1:], 0.0, None))
    z = float(norm.ppf(0.5 + level / 2.0))

    intervals: List[CoefficientInterval] = []
    errors = dict(zip(active_names, std_errors))
    for name, weight in zip(model.feature_names, model.weights):
        if name not in errors:
            intervals.append(CoefficientInterval(feature=name, estimate=float(weight), level=level))
            continue
        se = float(errors[name])
        low, high = float(weight) - z * se, float(weight) + z * se
        intervals.append(
            CoefficientInterval(
                feature=name,
                estimate=float(weight),
                std_error=se,
                low=low,
                high=high,
                significant=bool(low > 0 or high < 0),
                level=level,
            )
        )
    return intervals


def with_intervals(model: LogisticModel, intervals: Sequence[CoefficientInterval]) -> LogisticModel:
    return replace(model, intervals=tuple(intervals))


def train_multilabel(
    X: FeatureMatrix,
    Y: Mapping[str, Sequence[int]],
    settings: Optional[ClassifierConfig] = None,
    workers: int = config.WORKERS,
) -> Dict[str, LogisticModel]:
    """
    One independent binary model per label column, trained concurrently

    Raises:
        TrainingError: Naming the first failing dimension (in column order)
    """
    dimensions = list(Y)

    def fit(dimension: str) -> LogisticModel:
        try:
            return train_logistic(X, Y[dimension], settings, target=dimension)
        except TrainingError as e:
            if e.dimension == dimension:
                raise
            raise TrainingError(f"{dimension}: {e}", dimension=dimension) from e

    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        futures = [pool.submit(fit, dimension) for dimension in dimensions]
        models = [future.result() for future in futures]
    return dict(zip(dimensions, models))


def baseline_train(y: Sequence[int], seed: int = config.DEFAULT_SEED) -> BaselineModel:
    labels = np.asarray(y)
    if labels.size == 0:
        raise TrainingError("baseline needs at least one training label")
    return BaselineModel(positive_rate=float(labels.mean()), seed=seed)


def baseline_predict(model: BaselineModel, n: int) -> np.ndarray:
    """n labels, each 1 with probability positive_rate; same seed, same vector"""
    rng = np.random.default_rng(model.seed)
    return (rng.random(n) < model.positive_rate).astype(int)


def model_to_document(model: LogisticModel) -> LogisticModelDocument:
    return LogisticModelDocument(
        schema_version=config.SCHEMA_VERSION,
        target=model.target,
        feature_names=list(model.feature_names),
        weights=[float(w) for w in model.weights],
        intercept=float(model.intercept),
        means=[float(m) for m in model.means],
        scales=[float(s) for s in model.scales],
        dropped_features=list(model.dropped_features),
        training=model.training,
        intervals=list(model.intervals) if model.intervals is not None else None,
    )


def model_from_document(document: LogisticModelDocument) -> LogisticModel:
    return LogisticModel(
        target=document.target,
        feature_names=tuple(document.feature_names),
        weights=np.array(document.weights, dtype=np.float64),
        intercept=float(document.intercept),
        means=np.array(document.means, dtype=np.float64),
        scales=np.array(document.scales, dtype=np.float64),
        dropped_features=tuple(document.dropped_features),
        training=document.training,
        intervals=tuple(document.intervals) if document.intervals is not None else None,
    )


def save_model(model: LogisticModel, path: Union[str, Path]) -> None:
    write_document(model_to_document(model), path)


def load_model(path: Union[str, Path]) -> LogisticModel:
    return model_from_document(read_document(path, LogisticModelDocument))
