"""
Artifact persistence
Saves and reloads a trained moral-foundation model set

Layout of an artifact directory:
    artifacts.json          index (schema version, feature mode, dimensions)
    axes.json               axis set with baselines (frame_axis / combined)
    models/<dimension>.json one logistic model per dimension
"""
import logging
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Optional, Union

import config
from models.artifacts import ArtifactIndex
from models.experiment import FeatureMode
from modules.axes import AxisSet, load_axis_set, save_axis_set
from modules.classifier import LogisticModel, load_model, save_model
from modules.documents import read_document, write_document
from modules.errors import ArtifactError

logger = logging.getLogger(__name__)

INDEX_FILE = "artifacts.json"
AXES_FILE = "axes.json"


@dataclass(frozen=True)
class MFArtifacts:
    """Per-dimension models plus what is needed to build their inputs"""
    mode: FeatureMode
    models: Dict[str, LogisticModel]
    axes: Optional[AxisSet] = None

    @property
    def dimensions(self):
        return list(self.models)


def _model_filename(dimension: str) -> str:
    return "models/" + re.sub(r"[^A-Za-z0-9_.-]", "_", dimension) + ".json"


def save_artifacts(artifacts: MFArtifacts, directory: Union[str, Path]) -> Path:
    """
    Write the index, axes and model documents

    Raises:
        ArtifactError: Directory cannot be written, or a frame mode without axes
    """
    directory = Path(directory)
    if artifacts.mode != FeatureMode.EXTERNAL and artifacts.axes is None:
        raise ArtifactError(f"mode {artifacts.mode.value} artifacts need an axis set")
    try:
        directory.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise ArtifactError(f"Cannot create {directory}: {e}") from e

    files = {dimension: _model_filename(dimension) for dimension in artifacts.models}
    if len(set(files.values())) != len(files):
        raise ArtifactError("dimension names collide after filename sanitizing")

    axes_file = None
    if artifacts.axes is not None:
        axes_file = AXES_FILE
        save_axis_set(artifacts.axes, directory / AXES_FILE)
    for dimension, model in artifacts.models.items():
        save_model(model, directory / files[dimension])

    index = ArtifactIndex(
        schema_version=config.SCHEMA_VERSION,
        mode=artifacts.mode.value,
        dimensions=list(artifacts.models),
        axes_file=axes_file,
        model_files=files,
    )
    write_document(index, directory / INDEX_FILE)
    logger.info("Saved %d models to %s", len(files), directory)
    return directory


def load_artifacts(directory: Union[str, Path]) -> MFArtifacts:
    """
    Reload a saved model set

    Raises:
        ArtifactError: Missing or invalid files
        SchemaVersionError: Any document written with another schema version
    """
    directory = Path(directory)
    index = read_document(directory / INDEX_FILE, ArtifactIndex)
    try:
        mode = FeatureMode(index.mode)
    except ValueError as e:
        raise ArtifactError(f"{directory / INDEX_FILE}: unknown feature mode {index.mode!r}") from e

    axes = load_axis_set(directory / index.axes_file) if index.axes_file else None
    models = {dimension: load_model(directory / index.model_files[dimension]) for dimension in index.dimensions}
    for dimension, model in models.items():
        if model.target != dimension:
            raise ArtifactError(f"{index.model_files[dimension]}: model target {model.target!r} != {dimension!r}")
    return MFArtifacts(mode=mode, models=models, axes=axes)
