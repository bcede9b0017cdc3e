"""
Embedding store module
Loads pretrained word-vector text files and provides the vector math
used by axis construction and document scoring

File format: one entry per line, a token followed by whitespace-separated
decimal components. A first line of exactly two integers (vocab size and
dimension, as written by word2vec-style tools) is treated as a header.
"""
import logging
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Tuple, Union

import numpy as np

from models.embedding import LoadReport
from modules.errors import EmbeddingLoadError

logger = logging.getLogger(__name__)


class EmbeddingStore:
    """Immutable word -> vector mapping of a fixed dimension"""

    def __init__(self, words: List[str], vectors: np.ndarray, source_path: str = ""):
        """
        Build a store from parallel word / vector data

        Args:
            words: Unique lowercase tokens
            vectors: Array of shape (len(words), dimension)
            source_path: Provenance only
        """
        vectors = np.array(vectors, dtype=np.float64)
        if vectors.ndim != 2 or vectors.shape[0] != len(words):
            raise ValueError("vectors must be a 2-D array with one row per word")
        if vectors.shape[1] < 1:
            raise ValueError("dimension must be at least 1")

        vectors.setflags(write=False)
        self._words = list(words)
        self._vectors = vectors
        self._index: Dict[str, int] = {word: i for i, word in enumerate(self._words)}
        if len(self._index) != len(self._words):
            raise ValueError("words must be unique")
        self.source_path = source_path

    @classmethod
    def from_mapping(cls, entries: Dict[str, Iterable[float]], source_path: str = "") -> "EmbeddingStore":
        """Build a store from a {word: vector} dict (keys are lowercased)"""
        words = [word.lower() for word in entries]
        vectors = np.array([list(vec) for vec in entries.values()], dtype=np.float64)
        return cls(words, vectors, source_path)

    @property
    def dimension(self) -> int:
        return int(self._vectors.shape[1])

    @property
    def words(self) -> List[str]:
        return list(self._words)

    @property
    def vectors(self) -> np.ndarray:
        """Read-only matrix, row i belongs to words[i]"""
        return self._vectors

    def __len__(self) -> int:
        return len(self._words)

    def __contains__(self, word: str) -> bool:
        return word.lower() in self._index

    def lookup(self, word: str) -> Optional[np.ndarray]:
        """Vector for the lowercased word, or None when out of vocabulary"""
        row = self._index.get(word.lower())
        if row is None:
            return None
        return self._vectors[row]

    def normalized(self) -> "EmbeddingStore":
        """Copy of the store with every vector scaled to unit length"""
        norms = np.linalg.norm(self._vectors, axis=1, keepdims=True)
        return EmbeddingStore(self._words, self._vectors / norms, self.source_path)


def lookup(store: EmbeddingStore, word: str) -> Optional[np.ndarray]:
    """Module-level alias for EmbeddingStore.lookup"""
    return store.lookup(word)


def cosine_similarity(u: np.ndarray, v: np.ndarray) -> float:
    """
    Cosine of the angle between two vectors, clamped into [-1, 1]

    Args:
        u: First vector
        v: Second vector (same dimension)

    Returns:
        dot(u, v) / (|u| |v|)

    Raises:
        ValueError: Dimension mismatch or zero-norm input
    """
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.shape != v.shape:
        raise ValueError(f"dimension mismatch: {u.shape} vs {v.shape}")

    norm_u = np.linalg.norm(u)
    norm_v = np.linalg.norm(v)
    if norm_u == 0 or norm_v == 0:
        raise ValueError("cosine similarity is undefined for zero-norm vectors")

    value = float(np.dot(u, v) / (norm_u * norm_v))
    return min(1.0, max(-1.0, value))


def _is_header(parts: List[str]) -> bool:
    return len(parts) == 2 and all(part.isdigit() for part in parts)


def _parse_components(parts: List[str]) -> Optional[np.ndarray]:
    """Finite, not-all-zero components or None"""
    if not parts:
        return None
    try:
        values = np.array([float(part) for part in parts], dtype=np.float64)
    except ValueError:
        return None
    if not np.all(np.isfinite(values)) or not np.any(values):
        return None
    return values


def load_embeddings(
    path: Union[str, Path],
    expected_dimension: Optional[int] = None,
    normalize: bool = False,
) -> Tuple[EmbeddingStore, LoadReport]:
    """
    Load a whitespace-separated word-vector text file

    Duplicate words (after lowercasing) keep the first occurrence. Lines with
    the wrong arity, unparsable or non-finite numbers, or an all-zero vector
    are skipped and counted. Blank lines and a leading two-integer header are
    ignored and not counted.

    Args:
        path: Vector file (UTF-8)
        expected_dimension: Required dimension; when omitted the first
            well-formed line decides
        normalize: Scale every kept vector to unit length

    Returns:
        (store, load report)

    Raises:
        EmbeddingLoadError: Unreadable file, no well-formed lines, or a first
            well-formed line that conflicts with expected_dimension
    """
    if expected_dimension is not None and expected_dimension < 1:
        raise EmbeddingLoadError(f"expected_dimension must be >= 1, got {expected_dimension}")

    path = Path(path)
    dimension = expected_dimension
    dimension_fixed = False
    words: List[str] = []
    rows: List[np.ndarray] = []
    seen = set()
    lines_read = duplicates = malformed = 0
    header_skipped = False
    first_content_line = True

    try:
        with open(path, "r", encoding="utf-8") as handle:
            for line_number, line in enumerate(handle, start=1):
                parts = line.split()
                if not parts:
                    continue

                if first_content_line:
                    first_content_line = False
                    if _is_header(parts):
                        header_skipped = True
                        continue

                lines_read += 1
                values = _parse_components(parts[1:])
                if values is None:
                    malformed += 1
                    continue

                if not dimension_fixed:
                    if expected_dimension is not None and len(values) != expected_dimension:
                        raise EmbeddingLoadError(
                            f"{path}:{line_number}: first vector has dimension {len(values)}, "
                            f"expected {expected_dimension}"
                        )
                    dimension = len(values)
                    dimension_fixed = True
                elif len(values) != dimension:
                    malformed += 1
                    continue

                word = parts[0].lower()
                if word in seen:
                    duplicates += 1
                    continue

                seen.add(word)
                words.append(word)
                rows.append(values)
    except OSError as e:
        raise EmbeddingLoadError(f"Cannot read embedding file {path}: {e}") from e
    except UnicodeDecodeError as e:
        raise EmbeddingLoadError(f"Embedding file {path} is not valid UTF-8: {e}") from e

    if not words:
        raise EmbeddingLoadError(f"{path}: no well-formed vector lines")

    store = EmbeddingStore(words, np.vstack(rows), str(path))
    if normalize:
        store = store.normalized()

    report = LoadReport(
        source_path=str(path),
        dimension=store.dimension,
        lines_read=lines_read,
        entries_kept=len(words),
        duplicates_skipped=duplicates,
        malformed_skipped=malformed,
        header_skipped=header_skipped,
        normalized=normalize,
    )
    if duplicates or malformed:
        logger.warning(
            "%s: skipped %d duplicate and %d malformed lines", path, duplicates, malformed
        )
    logger.info("Loaded %d vectors of dimension %d from %s", len(words), store.dimension, path)
    return store, report


def write_embeddings(store: EmbeddingStore, path: Union[str, Path]) -> None:
    """
    Write a store back to the text format (no header)

    Components use the shortest repr that round-trips, so reloading yields
    bit-identical vectors.
    """
    path = Path(path)
    try:
        with open(path, "w", encoding="utf-8") as handle:
            for word, vector in zip(store.words, store.vectors):
                components = " ".join(repr(float(x)) for x in vector)
                handle.write(f"{word} {components}\n")
    except OSError as e:
        raise EmbeddingLoadError(f"Cannot write embedding file {path}: {e}") from e

