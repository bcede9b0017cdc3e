"""
JSON document helpers
Versioned read/write of pydantic documents (axis sets, models, manifests)
"""
import json
from pathlib import Path
from typing import Type, TypeVar, Union

from pydantic import BaseModel, ValidationError

import config
from modules.errors import ArtifactError, SchemaVersionError

DocumentT = TypeVar("DocumentT", bound=BaseModel)


def write_document(document: BaseModel, path: Union[str, Path]) -> None:
    """Write a document as indented JSON (non-finite floats refused)"""
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        text = json.dumps(document.model_dump(mode="json"), indent=2, allow_nan=False)
        path.write_text(text + "\n", encoding="utf-8")
    except ValueError as e:
        raise ArtifactError(f"{path}: refusing to write non-finite values: {e}") from e
    except OSError as e:
        raise ArtifactError(f"Cannot write {path}: {e}") from e


def read_document(path: Union[str, Path], model: Type[DocumentT]) -> DocumentT:
    """
    Read and validate a versioned document

    Raises:
        ArtifactError: Unreadable file, bad JSON, or validation failure
        SchemaVersionError: schema_version differs from config.SCHEMA_VERSION
    """
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except OSError as e:
        raise ArtifactError(f"Cannot read {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise ArtifactError(f"{path}: invalid JSON at line {e.lineno}: {e.msg}") from e

    if not isinstance(raw, dict):
        raise ArtifactError(f"{path}: expected a JSON object")

    found = raw.get("schema_version")
    if not isinstance(found, int) or found != config.SCHEMA_VERSION:
        raise SchemaVersionError(str(path), found, config.SCHEMA_VERSION)

    try:
        return model.model_validate(raw)
    except ValidationError as e:
        raise ArtifactError(f"{path}: {e}") from e
