"""
Frame scorer module
Tokenizes documents and computes framing Bias and Intensity per semantic axis

For a document D and axis A (f_d = frequency of word d, s = cosine):
    Bias      B(D) = sum f_d * s(A, d) / sum f_d
    Intensity I(D) = sum f_d * (s(A, d) - B(T))^2 / sum f_d
where B(T) is the Bias of the whole corpus T read as one document.

Only in-vocabulary words enter either sum. A document with no in-vocabulary
word has no score (None), which is different from a score of 0.0.
"""
import logging
import re
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from modules.axes import AxisSet, SemanticAxis
from modules.embedding_store import EmbeddingStore
from modules.errors import ArtifactError, MissingBaselineError, ScoringError
from modules.features import FeatureMatrix

logger = logging.getLogger(__name__)

# Runs of letters and apostrophes; digits, underscores and punctuation split
TOKEN_PATTERN = re.compile(r"(?:[^\W\d_]|')+")


@dataclass(frozen=True)
class TokenBag:
    """Word multiset of one document"""
    tokens: Mapping[str, int] = field(default_factory=dict)

    def __post_init__(self):
        counts = Counter({word: int(count) for word, count in self.tokens.items()})
        if any(count < 1 for count in counts.values()):
            raise ValueError("token counts must be >= 1")
        object.__setattr__(self, "tokens", counts)

    @property
    def total(self) -> int:
        return sum(self.tokens.values())

    def __len__(self) -> int:
        return len(self.tokens)

    def in_vocab_total(self, store: EmbeddingStore) -> int:
        return sum(count for word, count in self.tokens.items() if word in store)

    def scaled(self, factor: int) -> "TokenBag":
        return TokenBag({word: count * factor for word, count in self.tokens.items()})

    @classmethod
    def merged(cls, bags: Iterable["TokenBag"]) -> "TokenBag":
        """Frequency-wise union of several bags"""
        pooled: Counter = Counter()
        for bag in bags:
            pooled.update(bag.tokens)
        return cls(pooled)


@dataclass(frozen=True)
class FrameScores:
    """(bias, intensity) per axis for one document, in axis order"""
    document_id: str
    names: Tuple[str, ...]
    bias: np.ndarray
    intensity: np.ndarray
    oov_only: bool = False

    def as_vector(self) -> np.ndarray:
        """Interleaved [b_1, i_1, b_2, i_2, ...] of length 2 x axes"""
        stacked = np.empty(2 * len(self.names))
        stacked[0::2] = self.bias
        stacked[1::2] = self.intensity
        return stacked


@dataclass(frozen=True)
class ScoredCorpus:
    axis_names: Tuple[str, ...]
    scores: Tuple[FrameScores, ...]

    @property
    def oov_only_count(self) -> int:
        return sum(1 for score in self.scores if score.oov_only)

    @property
    def ids(self) -> List[str]:
        return [score.document_id for score in self.scores]


def feature_names(axis_names: Sequence[str]) -> List[str]:
    names = []
    for name in axis_names:
        names.extend([f"{name}_bias", f"{name}_intensity"])
    return names


def token_list(text: str) -> List[str]:
    """
    Lowercase, split on anything that is not a letter or apostrophe,
    strip leading/trailing apostrophes, drop empty tokens
    """
    text = text.replace("’", "'").lower()
    tokens = (match.strip("'") for match in TOKEN_PATTERN.findall(text))
    return [token for token in tokens if token]


def tokenize(text: str) -> TokenBag:
    """
    Bag of the tokens of token_list(text)

    Examples:
        "Kill, kill!" -> {kill: 2}
        "" -> {}
    """
    return TokenBag(Counter(token_list(text)))


def _cosines(vectors: np.ndarray, axes: np.ndarray) -> np.ndarray:
    """Cosine of every row of vectors against every row of axes, clamped"""
    dots = vectors @ axes.T
    norms = np.linalg.norm(vectors, axis=1)[:, None] * np.linalg.norm(axes, axis=1)[None, :]
    return np.clip(dots / norms, -1.0, 1.0)


def _bag_arrays(bag: TokenBag, store: EmbeddingStore) -> Optional[Tuple[np.ndarray, np.ndarray]]:
    """(frequencies, vectors) over in-vocabulary words, sorted by word"""
    words = sorted(word for word in bag.tokens if word in store)
    if not words:
        return None
    freqs = np.array([bag.tokens[word] for word in words], dtype=np.float64)
    vectors = np.vstack([store.lookup(word) for word in words])
    return freqs, vectors


def document_bias(bag: TokenBag, axis: SemanticAxis, store: EmbeddingStore) -> Optional[float]:
    """
    Frequency-weighted mean cosine of the document's words with the axis

    Returns:
        Bias in [-1, 1] (positive leans to the virtue pole), or None when no
        token has a vector
    """
    arrays = _bag_arrays(bag, store)
    if arrays is None:
        return None
    freqs, vectors = arrays
    cosines = _cosines(vectors, axis.vector[None, :])[:, 0]
    return float(np.clip(np.dot(freqs, cosines) / freqs.sum(), -1.0, 1.0))


def corpus_baseline(corpus: Sequence[TokenBag], axis: SemanticAxis, store: EmbeddingStore) -> float:
    """
    Bias of the whole corpus pooled into one document

    Raises:
        ScoringError: Empty corpus, or no in-vocabulary token anywhere
    """
    if not corpus:
        raise ScoringError("cannot compute a baseline over an empty corpus")
    baseline = document_bias(TokenBag.merged(corpus), axis, store)
    if baseline is None:
        raise ScoringError(f"axis {axis.name!r}: corpus has no in-vocabulary tokens")
    return baseline


def document_intensity(
    bag: TokenBag, axis: SemanticAxis, baseline: float, store: EmbeddingStore
) -> Optional[float]:
    """
    Frequency-weighted mean squared deviation of word cosines from the baseline

    Returns:
        Intensity >= 0, or None when no token has a vector
    """
    if not np.isfinite(baseline):
        raise ScoringError(f"axis {axis.name!r}: baseline must be finite")
    arrays = _bag_arrays(bag, store)
    if arrays is None:
        return None
    freqs, vectors = arrays
    cosines = _cosines(vectors, axis.vector[None, :])[:, 0]
    deviations = cosines - baseline
    return float(np.dot(freqs, deviations * deviations) / freqs.sum())


def _require_baselines(axes: AxisSet) -> np.ndarray:
    if not axes.has_baselines():
        missing = [name for name in axes.names if not axes.baselines or name not in axes.baselines]
        raise MissingBaselineError(f"no corpus baseline for axes: {', '.join(missing)}")
    return np.array([axes.baselines[name] for name in axes.names], dtype=np.float64)


def frame_features(
    bag: TokenBag, axes: AxisSet, store: EmbeddingStore, document_id: str = ""
) -> FrameScores:
    """
    Stack (bias, intensity) for every axis

    Raises:
        MissingBaselineError: An axis has no baseline
        ScoringError: No token of the document has a vector
    """
    baselines = _require_baselines(axes)
    arrays = _bag_arrays(bag, store)
    if arrays is None:
        raise ScoringError(f"document {document_id!r}: no in-vocabulary tokens")
    freqs, vectors = arrays
    return _scores_from_cosines(document_id, axes.names, freqs, _cosines(vectors, axes.matrix), baselines)


def _scores_from_cosines(
    document_id: str, names: Sequence[str], freqs: np.ndarray, cosines: np.ndarray, baselines: np.ndarray
) -> FrameScores:
    total = freqs.sum()
    bias = np.clip(freqs @ cosines / total, -1.0, 1.0)
    deviations = cosines - baselines[None, :]
    intensity = freqs @ (deviations * deviations) / total
    return FrameScores(document_id, tuple(names), bias, intensity)


class FrameScorer:
    """
    Batch scorer over a fixed axis set and store

    Word cosines are computed once per word and cached, so scoring a large
    corpus costs one matrix product over its vocabulary.
    """

    def __init__(self, axes: AxisSet, store: EmbeddingStore, cache: Optional[Dict[str, np.ndarray]] = None):
        if axes.embedding_dimension != store.dimension:
            raise ScoringError(
                f"axes have dimension {axes.embedding_dimension}, store has {store.dimension}"
            )
        self.axes = axes
        self.store = store
        self._matrix = axes.matrix
        self._cache: Dict[str, np.ndarray] = {} if cache is None else cache

    def rebased(self, axes: AxisSet) -> "FrameScorer":
        """Scorer for the same axis vectors with other baselines, sharing the cosine cache"""
        if axes.names != self.axes.names or not np.array_equal(axes.matrix, self._matrix):
            raise ScoringError("rebased scorer needs the same axis vectors")
        return FrameScorer(axes, self.store, cache=self._cache)

    def prime(self, bags: Iterable[TokenBag]) -> None:
        """Compute cosines for every not-yet-cached in-vocabulary word"""
        vocabulary = set()
        for bag in bags:
            vocabulary.update(word for word in bag.tokens if word in self.store and word not in self._cache)
        if not vocabulary:
            return
        words = sorted(vocabulary)
        cosines = _cosines(np.vstack([self.store.lookup(word) for word in words]), self._matrix)
        for word, row in zip(words, cosines):
            self._cache[word] = row

    def _arrays(self, bag: TokenBag) -> Optional[Tuple[np.ndarray, np.ndarray]]:
        words = sorted(word for word in bag.tokens if word in self.store)
        if not words:
            return None
        self.prime([TokenBag({word: 1 for word in words if word not in self._cache})])
        freqs = np.array([bag.tokens[word] for word in words], dtype=np.float64)
        return freqs, np.vstack([self._cache[word] for word in words])

    def compute_baselines(self, corpus: Sequence[TokenBag]) -> AxisSet:
        """Axis set with every baseline set from the pooled corpus"""
        if not corpus:
            raise ScoringError("cannot compute baselines over an empty corpus")
        arrays = self._arrays(TokenBag.merged(corpus))
        if arrays is None:
            raise ScoringError("corpus has no in-vocabulary tokens")
        freqs, cosines = arrays
        bias = np.clip(freqs @ cosines / freqs.sum(), -1.0, 1.0)
        return self.axes.with_baselines(dict(zip(self.axes.names, (float(b) for b in bias))))

    def score(self, bag: TokenBag, document_id: str = "") -> FrameScores:
        """Scores for one document; OOV-only documents get zeros and the oov_only flag"""
        baselines = _require_baselines(self.axes)
        arrays = self._arrays(bag)
        if arrays is None:
            zeros = np.zeros(len(self.axes))
            return FrameScores(document_id, tuple(self.axes.names), zeros, zeros.copy(), oov_only=True)
        freqs, cosines = arrays
        return _scores_from_cosines(document_id, self.axes.names, freqs, cosines, baselines)

    def score_documents(self, documents: Sequence[Tuple[str, TokenBag]]) -> ScoredCorpus:
        self.prime(bag for _, bag in documents)
        scores = tuple(self.score(bag, document_id) for document_id, bag in documents)
        return ScoredCorpus(tuple(self.axes.names), scores)


def compute_baselines(corpus: Sequence[TokenBag], axes: AxisSet, store: EmbeddingStore) -> AxisSet:
    """AxisSet with baselines from the given corpus (one pooled document)"""
    return FrameScorer(axes, store).compute_baselines(corpus)


def score_corpus(
    documents: Sequence[Tuple[str, TokenBag]], axes: AxisSet, store: EmbeddingStore
) -> ScoredCorpus:
    """
    Score (id, bag) pairs with an axis set whose baselines are set

    OOV-only documents are mapped to (0, 0) per axis and flagged.
    """
    scored = FrameScorer(axes, store).score_documents(documents)
    if scored.oov_only_count:
        logger.warning(
            "%d of %d documents have no in-vocabulary tokens", scored.oov_only_count, len(scored.scores)
        )
    return scored


def frame_feature_matrix(scored: ScoredCorpus) -> FeatureMatrix:
    """FeatureMatrix with <dim>_bias, <dim>_intensity columns in axis order"""
    names = feature_names(scored.axis_names)
    if scored.scores:
        values = np.vstack([score.as_vector() for score in scored.scores])
    else:
        values = np.zeros((0, len(names)))
    return FeatureMatrix(tuple(scored.ids), values, tuple(names))


def scores_frame(scored: ScoredCorpus) -> pd.DataFrame:
    frame = frame_feature_matrix(scored).to_frame()
    frame["oov_only"] = [int(score.oov_only) for score in scored.scores]
    return frame


def write_scores_csv(scored: ScoredCorpus, path: Union[str, Path]) -> None:
    """One row per document: id, <dim>_bias, <dim>_intensity ..., oov_only"""
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        scores_frame(scored).to_csv(path, index=False, lineterminator="\n")
    except OSError as e:
        raise ArtifactError(f"Cannot write {path}: {e}") from e
