"""
Test semantic axis construction and axis-set persistence
"""
import json

import numpy as np
import pytest

from models.lexicon import MoralLexicon
from modules.axes import build_axis, build_axis_set, load_axis_set, save_axis_set
from modules.embedding_store import EmbeddingStore
from modules.errors import ArtifactError, AxisError, SchemaVersionError
from modules.lexicon import default_lexicon


def test_singleton_poles(store_factory):
    """Test virtues {cat} vs vices {dog} gives cat - dog"""
    store = store_factory({"cat": (1.0, 0.0), "dog": (0.0, 1.0)})
    axis = build_axis(store, "d", ["cat"], ["dog"])

    np.testing.assert_array_equal(axis.vector, [1.0, -1.0])
    assert (axis.virtue_words_used, axis.vice_words_used) == (1, 1)


def test_degenerate_axis(store_factory):
    """Test pole means that coincide raise AxisError"""
    store = store_factory({"a": (2.0, 0.0), "b": (0.0, 2.0), "c": (1.0, 1.0)})
    with pytest.raises(AxisError) as excinfo:
        build_axis(store, "d", ["a", "b"], ["c"])
    assert excinfo.value.dimension == "d"


def test_mean_difference_oracle(store_factory):
    """Test a 4-word fixture against a hand-computed mean difference"""
    vectors = {
        "care": (0.2, 1.5, -0.3),
        "protect": (0.6, 0.9, 0.1),
        "harm": (-1.1, 0.4, 0.7),
        "kill": (-0.5, -0.2, 1.3),
    }
    store = store_factory(vectors)
    axis = build_axis(store, "care", ["care", "protect"], ["harm", "kill"])

    expected = (np.array(vectors["care"]) + np.array(vectors["protect"])) / 2 - (
        np.array(vectors["harm"]) + np.array(vectors["kill"])
    ) / 2
    np.testing.assert_allclose(axis.vector, expected, atol=1e-12)


def test_oov_words_excluded_from_mean(store_factory):
    """Test out-of-vocabulary words are skipped, not zero-filled"""
    store = store_factory({"cat": (2.0, 0.0), "dog": (0.0, 2.0)})
    axis = build_axis(store, "d", ["cat", "unicorn"], ["dog"])

    np.testing.assert_array_equal(axis.vector, [2.0, -2.0])
    assert axis.virtue_words_used == 1


def test_empty_pole_after_oov(store_factory):
    """Test a pole with no in-vocabulary words raises"""
    store = store_factory({"cat": (1.0, 0.0)})
    with pytest.raises(AxisError, match="vice"):
        build_axis(store, "d", ["cat"], ["unicorn"])


def test_axis_independent_of_word_order(synthetic_store):
    """Test pole order does not change the axis bits"""
    forward = build_axis(synthetic_store, "d", ["w00", "w01", "w02"], ["w03", "w04"])
    backward = build_axis(synthetic_store, "d", ["w02", "w01", "w00"], ["w04", "w03"])
    assert np.array_equal(forward.vector, backward.vector)


def test_axis_set_follows_lexicon(synthetic_store, synthetic_lexicon):
    """Test one axis per dimension in declared order, baselines unset"""
    axes = build_axis_set(synthetic_store, synthetic_lexicon)

    assert axes.names == ["alpha", "beta", "gamma"]
    assert axes.embedding_dimension == 10
    assert not axes.has_baselines()
    assert axes.matrix.shape == (3, 10)


def test_single_dimension_set_equals_build_axis(synthetic_store):
    """Test a 1-dimension lexicon gives the same axis as build_axis"""
    lexicon = MoralLexicon.model_validate({"name": "x", "dimensions": [{"name": "d", "virtues": ["w01"], "vices": ["w02"]}]})
    axes = build_axis_set(synthetic_store, lexicon)

    assert len(axes) == 1
    assert np.array_equal(axes.get("d").vector, build_axis(synthetic_store, "d", ["w01"], ["w02"]).vector)


def test_default_lexicon_six_axes(store_factory):
    """Test the bundled lexicon over a covering store gives six axes"""
    lexicon = default_lexicon()
    words = sorted({word for dim in lexicon.dimensions for word in dim.virtues + dim.vices})
    rng = np.random.default_rng(5)
    store = store_factory({word: rng.normal(size=8) for word in words})

    axes = build_axis_set(store, lexicon)
    assert len(axes) == 6
    assert axes.names == lexicon.dimension_names


def test_with_baselines(synthetic_store, synthetic_lexicon):
    """Test attaching baselines and rejecting unknown names"""
    axes = build_axis_set(synthetic_store, synthetic_lexicon)
    based = axes.with_baselines({"alpha": 0.1, "beta": -0.2, "gamma": 0.0})

    assert based.has_baselines()
    assert not axes.has_baselines()
    with pytest.raises(AxisError):
        axes.with_baselines({"delta": 0.3})


# ============================================================================
# Persistence
# ============================================================================

def test_save_load_round_trip(tmp_path, synthetic_store, synthetic_lexicon):
    """Test a saved axis set reloads bit-identically with baselines"""
    axes = build_axis_set(synthetic_store, synthetic_lexicon).with_baselines(
        {"alpha": 0.125, "beta": -1 / 3, "gamma": 0.0}
    )
    path = tmp_path / "axes.json"
    save_axis_set(axes, path)
    loaded = load_axis_set(path)

    assert loaded.names == axes.names
    assert loaded.baselines == axes.baselines
    for original, reloaded in zip(axes.axes, loaded.axes):
        assert np.array_equal(original.vector, reloaded.vector)


def test_schema_version_mismatch(tmp_path, synthetic_store, synthetic_lexicon):
    """Test a bumped schema version is refused"""
    path = tmp_path / "axes.json"
    save_axis_set(build_axis_set(synthetic_store, synthetic_lexicon), path)
    document = json.loads(path.read_text())
    document["schema_version"] += 1
    path.write_text(json.dumps(document))

    with pytest.raises(SchemaVersionError):
        load_axis_set(path)


def test_inconsistent_dimension_refused(tmp_path, synthetic_store, synthetic_lexicon):
    """Test an axis with the wrong number of components is refused"""
    path = tmp_path / "axes.json"
    save_axis_set(build_axis_set(synthetic_store, synthetic_lexicon), path)
    document = json.loads(path.read_text())
    document["axes"][0]["vector"].append(1.0)
    path.write_text(json.dumps(document))

    with pytest.raises(ArtifactError):
        load_axis_set(path)


# ============================================================================
# Axis algebra
# ============================================================================

def test_pole_swap_negates_axis(synthetic_store):
    forward = build_axis(synthetic_store, "d", ["w00", "w01", "w02"], ["w03", "w04"])
    swapped = build_axis(synthetic_store, "d", ["w03", "w04"], ["w00", "w01", "w02"])
    assert np.array_equal(swapped.vector, -forward.vector)


@pytest.mark.parametrize("scale", [0.5, 3.0, 250.0])
def test_axis_scales_with_vectors(synthetic_store, scale):
    """Test multiplying every stored vector by a > 0 multiplies the axis by a"""
    scaled = EmbeddingStore(synthetic_store.words, synthetic_store.vectors * scale)

    original = build_axis(synthetic_store, "d", ["w00", "w01", "w02"], ["w03", "w04"])
    rescaled = build_axis(scaled, "d", ["w00", "w01", "w02"], ["w03", "w04"])
    np.testing.assert_allclose(rescaled.vector, scale * original.vector, rtol=1e-12, atol=1e-12)


def test_virtue_at_pole_mean_leaves_axis_unchanged(synthetic_store):
    """Test adding a virtue word whose vector is the current virtue mean"""
    virtues, vices = ["w00", "w01", "w02"], ["w03", "w04"]
    pole_mean = np.mean([synthetic_store.lookup(word) for word in virtues], axis=0)
    extended = EmbeddingStore(synthetic_store.words + ["centroid"], np.vstack([synthetic_store.vectors, pole_mean]))

    original = build_axis(synthetic_store, "d", virtues, vices)
    widened = build_axis(extended, "d", virtues + ["centroid"], vices)
    np.testing.assert_allclose(widened.vector, original.vector, atol=1e-12)
    assert widened.virtue_words_used == 4
