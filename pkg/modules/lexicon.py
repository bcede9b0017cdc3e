"""
Lexicon module
Parses moral foundation micro-frame lexicons and checks them against an
embedding store

On-disk format (JSON):
    {
      "name": "...",
      "dimensions": [
        {"name": "care", "virtues": ["care", "protect"], "vices": ["harm", "kill"]},
        ...
      ]
    }

Words are matched exactly (no wildcard stems); multi-word entries are rejected.
"""
import json
import logging
from pathlib import Path
from typing import Union

from pydantic import ValidationError

import config
from models.lexicon import DimensionCoverage, LexiconCoverage, MoralLexicon, PoleCoverage
from modules.embedding_store import EmbeddingStore
from modules.errors import LexiconError

logger = logging.getLogger(__name__)


def _format_validation_error(error: ValidationError) -> str:
    messages = []
    for item in error.errors():
        location = ".".join(str(part) for part in item.get("loc", ()))
        message = item.get("msg", "")
        messages.append(f"{location}: {message}" if location else message)
    return "; ".join(messages)


def lexicon_from_text(text: str, source: str = "<string>") -> MoralLexicon:
    """
    Parse lexicon JSON text

    Args:
        text: JSON document
        source: Name used in error messages

    Returns:
        Validated MoralLexicon

    Raises:
        LexiconError: Syntax error (with line number) or invariant violation
    """
    try:
        document = json.loads(text)
    except json.JSONDecodeError as e:
        raise LexiconError(f"{source}: syntax error at line {e.lineno}, column {e.colno}: {e.msg}") from e

    try:
        return MoralLexicon.model_validate(document)
    except ValidationError as e:
        raise LexiconError(f"{source}: {_format_validation_error(e)}") from e


def parse_lexicon(path: Union[str, Path]) -> MoralLexicon:
    """
    Read and validate a lexicon file

    Raises:
        LexiconError: Unreadable file, syntax error, duplicate dimension name,
            empty pole, virtue/vice overlap, multi-word entry
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as e:
        raise LexiconError(f"Cannot read lexicon file {path}: {e}") from e

    lexicon = lexicon_from_text(text, source=str(path))
    logger.info("Parsed lexicon %r with %d dimensions", lexicon.name, len(lexicon.dimensions))
    return lexicon


def default_lexicon() -> MoralLexicon:
    """The bundled six-dimension lexicon (care ... general morality)"""
    return parse_lexicon(config.DEFAULT_LEXICON_PATH)


def serialize_lexicon(lexicon: MoralLexicon) -> str:
    """
    Canonical JSON text: words sorted, dimensions in declared order

    parse(serialize(x)) == x for every validated lexicon.
    """
    return json.dumps(lexicon.model_dump(), indent=2, ensure_ascii=False) + "\n"


def write_lexicon(lexicon: MoralLexicon, path: Union[str, Path]) -> None:
    path = Path(path)
    try:
        path.write_text(serialize_lexicon(lexicon), encoding="utf-8")
    except OSError as e:
        raise LexiconError(f"Cannot write lexicon file {path}: {e}") from e


def coverage(lexicon: MoralLexicon, store: EmbeddingStore) -> LexiconCoverage:
    """
    Report which lexicon words have vectors in the store

    Found and missing lists partition each pole's word set exactly.
    """
    dimensions = []
    for dim in lexicon.dimensions:
        poles = {}
        for pole_name, words in (("virtues", dim.virtues), ("vices", dim.vices)):
            found = [word for word in words if word in store]
            missing = [word for word in words if word not in store]
            poles[pole_name] = PoleCoverage(found=found, missing=missing)
        dimensions.append(DimensionCoverage(name=dim.name, **poles))

    report = LexiconCoverage(lexicon_name=lexicon.name, dimensions=dimensions)
    if report.missing_words:
        logger.info("%d lexicon words have no vector", len(report.missing_words))
    return report
