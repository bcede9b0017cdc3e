"""
Test logistic regression training, prediction, Wald intervals and the
frequency-distribution baseline
"""
import json

import numpy as np
import pytest
from scipy.special import expit

from models.artifacts import TrainingMetadata
from models.experiment import ClassifierConfig
from modules.classifier import (
    LogisticModel,
    baseline_predict,
    baseline_train,
    coefficient_intervals,
    load_model,
    logistic_objective,
    predict_label,
    predict_labels,
    predict_proba,
    save_model,
    train_logistic,
    train_multilabel,
    with_intervals,
)
from modules.errors import SchemaVersionError, TrainingError
from modules.features import FeatureMatrix


def matrix(values, names=None):
    values = np.asarray(values, dtype=np.float64)
    if values.ndim == 1:
        values = values[:, None]
    names = names or [f"x{j}" for j in range(values.shape[1])]
    return FeatureMatrix(tuple(f"r{i}" for i in range(values.shape[0])), values, tuple(names))


def fixed_model(weights, intercept, means=None, scales=None):
    k = len(weights)
    return LogisticModel(
        target="t",
        feature_names=tuple(f"x{j}" for j in range(k)),
        weights=np.asarray(weights, dtype=np.float64),
        intercept=intercept,
        means=np.zeros(k) if means is None else np.asarray(means, dtype=np.float64),
        scales=np.ones(k) if scales is None else np.asarray(scales, dtype=np.float64),
        dropped_features=(),
        training=TrainingMetadata(
            n_samples=1, positive_rate=0.5, iterations=0, final_loss=0.0, l2_strength=1.0,
            learning_rate=0.1, final_learning_rate=0.1, tolerance=1e-6, converged=True,
            stop_reason="gradient_tolerance",
        ),
    )


# ============================================================================
# Objective
# ============================================================================

def test_gradient_matches_finite_differences():
    """Test the analytic gradient against central differences on 20 instances"""
    rng = np.random.default_rng(0)
    h = 1e-6
    for _ in range(20):
        n, k = rng.integers(5, 30), rng.integers(1, 6)
        X = rng.normal(size=(n, k))
        y = rng.integers(0, 2, size=n).astype(float)
        w = rng.normal(size=k)
        b = float(rng.normal())
        l2 = float(rng.uniform(0.1, 5.0))

        _, grad_w, grad_b = logistic_objective(w, b, X, y, l2)
        analytic = np.concatenate([grad_w, [grad_b]])

        numeric = np.empty(k + 1)
        for j in range(k + 1):
            step = np.zeros(k + 1)
            step[j] = h
            plus = logistic_objective(w + step[:k], b + step[k], X, y, l2)[0]
            minus = logistic_objective(w - step[:k], b - step[k], X, y, l2)[0]
            numeric[j] = (plus - minus) / (2 * h)

        error = np.linalg.norm(numeric - analytic) / max(np.linalg.norm(numeric) + np.linalg.norm(analytic), 1e-12)
        assert error < 1e-6


# ============================================================================
# Training
# ============================================================================

def test_separable_one_dimension():
    """Test x<0 -> 0, x>0 -> 1 is fit perfectly with a positive weight"""
    x = np.array([-3.0, -2.5, -2.0, -1.5, -1.0, 1.0, 1.5, 2.0, 2.5, 3.0])
    y = (x > 0).astype(int)
    model = train_logistic(matrix(x), y)

    assert model.weights[0] > 0
    assert np.array_equal(predict_labels(model, matrix(x)), y)


def test_single_class_rejected():
    """Test all-positive labels raise TrainingError"""
    with pytest.raises(TrainingError, match="single class"):
        train_logistic(matrix([1.0, 2.0, 3.0]), [1, 1, 1])


@pytest.mark.parametrize("labels", [[0, 1], [0, 1, 2], [0.5, 1, 0]])
def test_bad_labels_rejected(labels):
    """Test wrong length and non-binary labels raise"""
    with pytest.raises(TrainingError):
        train_logistic(matrix([1.0, 2.0, 3.0]), labels)


def test_non_finite_features_rejected():
    with pytest.raises(TrainingError):
        train_logistic(matrix([1.0, np.nan, 3.0]), [0, 1, 0])


def test_zero_variance_column_dropped():
    """Test a constant column keeps weight 0 and is recorded"""
    rng = np.random.default_rng(1)
    x = rng.normal(size=40)
    X = matrix(np.column_stack([x, np.full(40, 7.0)]), ["signal", "constant"])
    model = train_logistic(X, (x > 0).astype(int))

    assert model.dropped_features == ("constant",)
    assert model.weights[1] == 0.0
    assert model.scales[1] == 1.0


def test_strong_regularization_limit():
    """Test l2 = 1e6 pushes weights to 0 and predictions to the base rate"""
    rng = np.random.default_rng(2)
    X = rng.normal(size=(200, 3))
    y = (X[:, 0] + 0.5 * rng.normal(size=200) > 0.3).astype(int)
    model = train_logistic(matrix(X), y, ClassifierConfig(l2_strength=1e6))

    assert np.all(np.abs(model.weights) < 1e-3)
    probabilities = model.predict_proba_matrix(X)
    assert np.allclose(probabilities, y.mean(), atol=1e-3)


def test_scale_invariance():
    """Test rescaling a column leaves predicted labels unchanged"""
    rng = np.random.default_rng(4)
    X = rng.normal(size=(150, 2))
    y = (X[:, 0] - X[:, 1] + rng.normal(size=150) > 0).astype(int)
    scaled = X * np.array([1000.0, 0.01])

    original = predict_labels(train_logistic(matrix(X), y), matrix(X))
    rescaled = predict_labels(train_logistic(matrix(scaled), y), matrix(scaled))
    assert np.array_equal(original, rescaled)


def test_row_permutation_invariance():
    """Test shuffling training rows yields the same model within tolerance"""
    rng = np.random.default_rng(5)
    X = rng.normal(size=(120, 3))
    y = (X @ np.array([1.0, -2.0, 0.5]) + rng.normal(size=120) > 0).astype(int)
    order = rng.permutation(120)

    a = train_logistic(matrix(X), y)
    b = train_logistic(matrix(X[order]), y[order])
    np.testing.assert_allclose(a.weights, b.weights, atol=1e-6)
    assert a.intercept == pytest.approx(b.intercept, abs=1e-6)


def test_training_metadata_recorded():
    rng = np.random.default_rng(6)
    X = rng.normal(size=(60, 2))
    y = (X[:, 0] > 0).astype(int)
    model = train_logistic(matrix(X), y, ClassifierConfig(max_iterations=3))

    assert model.training.iterations == 3
    assert model.training.stop_reason == "max_iterations"
    assert not model.training.converged
    assert model.training.n_samples == 60


def test_loss_never_increases():
    """Test the training loss after k iterations is non-increasing in k"""
    rng = np.random.default_rng(8)
    X = rng.normal(size=(80, 3))
    y = (X[:, 0] + 0.5 * X[:, 2] + rng.normal(size=80) > 0).astype(int)
    # a large first step forces the learning rate to halve along the way
    losses = [
        train_logistic(matrix(X), y, ClassifierConfig(max_iterations=k, learning_rate=50.0)).training.final_loss
        for k in range(1, 26)
    ]
    assert all(later <= earlier for earlier, later in zip(losses, losses[1:]))


# ============================================================================
# Prediction
# ============================================================================

def test_zero_model_predicts_half():
    """Test zero weights and intercept give 0.5 everywhere"""
    model = fixed_model([0.0, 0.0], 0.0)
    for x in ([0.0, 0.0], [5.0, -3.0], [-100.0, 1e6]):
        assert predict_proba(model, x) == 0.5


def test_predict_proba_hand_points():
    """Test the sigmoid of w.((x - mean) / scale) + b at five points"""
    model = fixed_model([0.8, -1.5], 0.3, means=[1.0, -2.0], scales=[2.0, 0.5])
    points = [[1.0, -2.0], [3.0, -2.0], [0.0, 0.0], [-4.0, 1.5], [10.0, -10.0]]
    for x in points:
        z = 0.8 * (x[0] - 1.0) / 2.0 - 1.5 * (x[1] + 2.0) / 0.5 + 0.3
        assert predict_proba(model, x) == pytest.approx(1.0 / (1.0 + np.exp(-z)), abs=1e-12)


@pytest.mark.parametrize("z", [40.0, 800.0, -40.0, -800.0])
def test_saturated_probability_stays_open(z):
    """Test large scores give probabilities strictly between 0 and 1"""
    p = predict_proba(fixed_model([1.0], 0.0), [z])
    assert 0.0 < p < 1.0
    assert (p > 0.5) == (z > 0)


def test_saturated_probability_matrix_stays_open():
    model = fixed_model([1.0], 0.0)
    p = model.predict_proba_matrix(np.array([[-1e4], [-40.0], [0.0], [40.0], [1e4]]))
    assert np.all((p > 0.0) & (p < 1.0))
    assert np.all(np.diff(p) >= 0)


def test_threshold_boundary():
    """Test probability 0.5 maps to 1 and 0.49 maps to 0"""
    assert predict_label(fixed_model([0.0], 0.0), [2.0]) == 1
    below = fixed_model([0.0], float(np.log(0.49 / 0.51)))
    assert predict_proba(below, [0.0]) == pytest.approx(0.49)
    assert predict_label(below, [0.0]) == 0
    assert predict_label(below, [0.0], threshold=0.4) == 1


def test_predict_rejects_bad_input():
    model = fixed_model([1.0, 1.0], 0.0)
    with pytest.raises(ValueError):
        predict_proba(model, [1.0])
    with pytest.raises(ValueError):
        predict_proba(model, [1.0, np.inf])


# ============================================================================
# Wald intervals
# ============================================================================

def test_intervals_symmetric_and_contain_estimate():
    rng = np.random.default_rng(7)
    X = rng.normal(size=(300, 2))
    y = (X[:, 0] + rng.normal(size=300) > 0).astype(int)
    model = train_logistic(matrix(X), y)
    intervals = coefficient_intervals(model, matrix(X), y, level=0.95)

    for interval in intervals:
        assert interval.low <= interval.estimate <= interval.high
        assert interval.estimate - interval.low == pytest.approx(interval.high - interval.estimate, rel=1e-9)
        assert interval.std_error > 0


def test_wider_level_wider_interval():
    rng = np.random.default_rng(8)
    X = rng.normal(size=(200, 1))
    y = (X[:, 0] + rng.normal(size=200) > 0).astype(int)
    model = train_logistic(matrix(X), y)
    narrow = coefficient_intervals(model, matrix(X), y, level=0.8)[0]
    wide = coefficient_intervals(model, matrix(X), y, level=0.99)[0]

    assert wide.high - wide.low > narrow.high - narrow.low


def test_separable_feature_is_significant():
    """Test a dominant signal has an interval excluding 0"""
    rng = np.random.default_rng(9)
    x = rng.normal(size=300)
    y = (x > 0).astype(int)
    model = train_logistic(matrix(x), y)
    interval = coefficient_intervals(model, matrix(x), y)[0]

    assert interval.significant
    assert interval.low > 0


def test_noise_feature_calibration():
    """Test a label-independent feature's interval covers 0 in >= 90 of 100 runs"""
    covered = 0
    for replication in range(100):
        rng = np.random.default_rng(1000 + replication)
        X = rng.normal(size=(500, 2))
        y = (rng.random(500) < expit(1.5 * X[:, 0])).astype(int)
        model = train_logistic(matrix(X, ["signal", "noise"]), y)
        noise = coefficient_intervals(model, matrix(X, ["signal", "noise"]), y)[1]
        covered += int(noise.low <= 0.0 <= noise.high)
    assert covered >= 90


def test_dropped_column_has_no_interval():
    rng = np.random.default_rng(10)
    x = rng.normal(size=50)
    X = matrix(np.column_stack([x, np.zeros(50)]), ["x", "flat"])
    y = (x + rng.normal(size=50) > 0).astype(int)
    model = train_logistic(X, y)
    intervals = coefficient_intervals(model, X, y)

    assert intervals[1].low is None and intervals[1].high is None
    assert intervals[1].significant is None
    assert intervals[0].low is not None


# ============================================================================
# Multi-label
# ============================================================================

def test_multilabel_equals_separate_fits():
    """Test each per-dimension model equals a direct train_logistic call"""
    rng = np.random.default_rng(11)
    X = matrix(rng.normal(size=(80, 3)))
    Y = {
        "care": (X.values[:, 0] > 0).astype(int),
        "purity": (X.values[:, 1] + X.values[:, 2] > 0).astype(int),
    }
    models = train_multilabel(X, Y, workers=2)

    assert list(models) == ["care", "purity"]
    for dimension, labels in Y.items():
        direct = train_logistic(X, labels, target=dimension)
        assert np.array_equal(models[dimension].weights, direct.weights)
        assert models[dimension].intercept == direct.intercept
        assert models[dimension].target == dimension


def test_multilabel_error_names_dimension():
    X = matrix(np.arange(6.0))
    with pytest.raises(TrainingError) as excinfo:
        train_multilabel(X, {"care": [0, 1, 0, 1, 0, 1], "purity": [1] * 6})
    assert excinfo.value.dimension == "purity"


# ============================================================================
# Baseline
# ============================================================================

def test_baseline_all_positive():
    """Test positive rate 1 predicts all ones"""
    model = baseline_train([1, 1, 1, 1])
    assert model.positive_rate == 1.0
    assert np.all(baseline_predict(model, 50) == 1)


@pytest.mark.parametrize("p", [0.3, 0.5, 0.8])
def test_baseline_expected_accuracy(p):
    """Test accuracy against independent truth approaches p^2 + (1 - p)^2"""
    n = 100000
    truth = (np.random.default_rng(123).random(n) < p).astype(int)
    model = baseline_train(truth, seed=7)
    predicted = baseline_predict(model, n)

    accuracy = float(np.mean(predicted == truth))
    assert accuracy == pytest.approx(p * p + (1 - p) * (1 - p), abs=0.01)


def test_baseline_deterministic():
    model = baseline_train([0, 1, 1, 0, 1], seed=3)
    assert np.array_equal(baseline_predict(model, 100), baseline_predict(model, 100))


def test_baseline_empty_training_set():
    with pytest.raises(TrainingError):
        baseline_train([])


# ============================================================================
# Persistence
# ============================================================================

def test_model_round_trip_is_bit_identical(tmp_path):
    rng = np.random.default_rng(12)
    X = rng.normal(size=(100, 3)) * np.array([1.0, 50.0, 0.02])
    y = (X[:, 0] + rng.normal(size=100) > 0).astype(int)
    model = train_logistic(matrix(X), y, target="care")
    model = with_intervals(model, coefficient_intervals(model, matrix(X), y))

    path = tmp_path / "care.json"
    save_model(model, path)
    loaded = load_model(path)

    assert np.array_equal(loaded.predict_proba_matrix(X), model.predict_proba_matrix(X))
    assert loaded.intervals == model.intervals
    assert loaded.training == model.training


def test_model_schema_bump_refused(tmp_path):
    path = tmp_path / "model.json"
    save_model(fixed_model([1.0], 0.0), path)
    document = json.loads(path.read_text())
    document["schema_version"] = 99
    path.write_text(json.dumps(document))

    with pytest.raises(SchemaVersionError):
        load_model(path)
