"""
Report writers
CSV/JSON outputs of the experiments and the run manifest

CSV files use comma separators, double-quote quoting, UTF-8, a header row and
"\\n" line endings; floats are written in shortest round-trip form.
"""
import json
import logging
from importlib.metadata import PackageNotFoundError, version
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

import pandas as pd

import config
from models.artifacts import RunManifest
from modules.documents import write_document
from modules.errors import ArtifactError
from modules.evaluation import CorrelationMatrix

logger = logging.getLogger(__name__)

LIBRARIES = ("numpy", "scipy", "scikit-learn", "pandas", "pydantic")

PathLike = Union[str, Path]


def _prepare(path: PathLike) -> Path:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise ArtifactError(f"Cannot create {path.parent}: {e}") from e
    return path


def write_table_csv(frame: pd.DataFrame, path: PathLike, index_label: Optional[str] = None) -> Path:
    path = _prepare(path)
    try:
        frame.to_csv(path, index=index_label is not None, index_label=index_label, lineterminator="\n")
    except OSError as e:
        raise ArtifactError(f"Cannot write {path}: {e}") from e
    return path


def write_json(data: Any, path: PathLike) -> Path:
    path = _prepare(path)
    try:
        path.write_text(json.dumps(data, indent=2, allow_nan=False) + "\n", encoding="utf-8")
    except (OSError, ValueError) as e:
        raise ArtifactError(f"Cannot write {path}: {e}") from e
    return path


def table_records(frame: pd.DataFrame) -> List[Dict[str, Any]]:
    """Rows as JSON-ready dicts; missing values become null"""
    return frame.astype(object).where(frame.notna(), None).to_dict(orient="records")


def write_table(frame: pd.DataFrame, stem: PathLike) -> List[Path]:
    """<stem>.csv and <stem>.json ({"columns": [...], "rows": [...]})"""
    stem = Path(stem)
    return [
        write_table_csv(frame, stem.with_suffix(".csv")),
        write_json({"columns": list(frame.columns), "rows": table_records(frame)}, stem.with_suffix(".json")),
    ]


def write_correlation(
matrix: CorrelationMatrix, stem: PathLike) -> List[Path]:
    """<stem>.csv (label-indexed matrix, undefined cells as null) and <stem>.json"""
    stem = Path(stem)
    return [
        write_table_csv(matrix.to_frame(), stem.with_suffix(".csv"), index_label="label"),
        write_json(matrix.to_document(), stem.with_suffix(".json")),
    ]


def library_versions() -> Dict[str, str]:
    versions = {}
    for name in LIBRARIES:
        try:
            versions[name] = version(name)
        except PackageNotFoundError:
            versions[name] = "unknown"
    return versions


def write_run_manifest(
    command: str,
    run_config: Dict[str, Any],
    seeds: Sequence[int],
    row_counts: Dict[str, Any],
    outputs: Sequence[PathLike],
    path: PathLike,
    notes: Sequence[str] = (),
) -> Path:
    """Config echo, seeds, row counts, versions and skipped-work notes; no timestamps, so reruns compare equal"""
    manifest = RunManifest(
        command=command,
        project=config.PROJECT_NAME,
        version=config.VERSION,
        schema_version=config.SCHEMA_VERSION,
        library_versions=library_versions(),
        config=run_config,
        seeds=list(seeds),
        row_counts=row_counts,
        outputs=sorted(Path(output).name for output in outputs),
        notes=list(notes),
    )
    path = _prepare(path)
    write_document(manifest, path)
    return path
