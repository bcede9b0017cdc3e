"""
Ingestion module
Reads headline corpora, annotation vote tables, external feature files and
the bundled JSON maps (source leanings, topic keywords, label groups)

All CSV input follows one dialect: comma separated (tab for .tsv),
double-quote quoting, UTF-8, header row required. Every ingest returns an
IngestReport whose kept + dropped counts add up to the rows read.
"""
import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

import config
from models.experiment import AnnotationColumns, CorpusColumns
from models.records import AnnotationRecord, HeadlineRecord, IngestReport
from modules.errors import DataError
from modules.features import FeatureMatrix
from modules.scorer import token_list

logger = logging.getLogger(__name__)

LEANING_LABELS = {"liberal": 1, "conservative": 0}

PathLike = Union[str, Path]


@dataclass(frozen=True)
class AnnotationDataset:
    """
    Annotated documents with raw vote counts and binary labels

    votes / labels are int frames indexed by document id, one column per dimension.
    """
    ids: Tuple[str, ...]
    texts: Tuple[str, ...]
    votes: pd.DataFrame
    labels: pd.DataFrame
    min_votes: int

    @property
    def dimensions(self) -> List[str]:
        return list(self.labels.columns)

    def __len__(self) -> int:
        return len(self.ids)

    def label_columns(self, ids: Optional[Sequence[str]] = None) -> Dict[str, np.ndarray]:
        frame = self.labels if ids is None else self.labels.loc[list(ids)]
        return {dimension: frame[dimension].to_numpy(dtype=int) for dimension in frame.columns}

    def documents(self) -> List[Tuple[str, str]]:
        return list(zip(self.ids, self.texts))


def _read_table(path: PathLike) -> pd.DataFrame:
    """All cells as strings; empty cells stay empty strings"""
    path = Path(path)
    sep = "\t" if path.suffix.lower() == ".tsv" else ","
    try:
        return pd.read_csv(path, sep=sep, dtype=str, keep_default_na=False, encoding="utf-8")
    except FileNotFoundError as e:
        raise DataError(f"{path} does not exist") from e
    except pd.errors.EmptyDataError as e:
        raise DataError(f"{path} is empty (a header row is required)") from e
    except (pd.errors.ParserError, UnicodeDecodeError) as e:
        raise DataError(f"{path}: cannot parse: {e}") from e
    except OSError as e:
        raise DataError(f"Cannot read {path}: {e}") from e


def _require_columns(frame: pd.DataFrame, columns: Sequence[str], path: PathLike) -> None:
    missing = [column for column in columns if column not in frame.columns]
    if missing:
        raise DataError(f"{path}: missing required columns: {', '.join(missing)}")


def _read_json(path: PathLike, key: str) -> dict:
    try:
        document = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as e:
        raise DataError(f"Cannot read {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise DataError(f"{path}: invalid JSON at line {e.lineno}: {e.msg}") from e
    if not isinstance(document, dict) or not isinstance(document.get(key), dict):
        raise DataError(f"{path}: expected an object with a {key!r} mapping")
    return document[key]


def load_leanings(path: PathLike = config.DEFAULT_LEANINGS_PATH) -> Dict[str, str]:
    """source -> liberal / conservative / center"""
    sources = _read_json(path, "sources")
    leanings = {}
    for source, leaning in sources.items():
        leaning = str(leaning).lower()
        if leaning not in ("liberal", "conservative", "center"):
            raise DataError(f"{path}: source {source!r} has unknown leaning {leaning!r}")
        leanings[source] = leaning
    return leanings


def load_topics(path: PathLike = config.DEFAULT_TOPICS_PATH) -> Dict[str, List[str]]:
    """topic -> keyword list"""
    topics = _read_json(path, "topics")
    for topic, keywords in topics.items():
        if not isinstance(keywords, list) or not keywords:
            raise DataError(f"{path}: topic {topic!r} needs a nonempty keyword list")
    return {topic: [str(k) for k in keywords] for topic, keywords in topics.items()}


def load_label_groups(path: PathLike = config.DEFAULT_LABEL_GROUPS_PATH) -> Dict[str, List[str]]:
    """group -> member vote columns"""
    groups = _read_json(path, "groups")
    for group, members in groups.items():
        if not isinstance(members, list) or not members:
            raise DataError(f"{path}: group {group!r} needs a nonempty member list")
    return {group: [str(m) for m in members] for group, members in groups.items()}


def _keyword_sequences(topics: Mapping[str, Sequence[str]]) -> Dict[str, List[Tuple[str, ...]]]:
    sequences = {}
    for topic, keywords in topics.items():
        tokenized = [tuple(token_list(keyword)) for keyword in keywords]
        sequences[topic] = [tokens for tokens in tokenized if tokens]
    return sequences


def _contains(tokens: Sequence[str], keyword: Tuple[str, ...]) -> bool:
    width = len(keyword)
    return any(tuple(tokens[i:i + width]) == keyword for i in range(len(tokens) - width + 1))


def _matching(tokens: Sequence[str], sequences: Mapping[str, Sequence[Tuple[str, ...]]]) -> List[str]:
    return [
        topic for topic, keywords in sequences.items()
        if any(_contains(tokens, keyword) for keyword in keywords)
    ]


def match_topics(text: str, topics: Mapping[str, Sequence[str]]) -> List[str]:
    """Topics (in mapping order) with a keyword occurring as whole tokens in text"""
    return _matching(token_list(text), _keyword_sequences(topics))


def ingest_headlines(
    path: PathLike,
    leanings: Mapping[str, str],
    topics: Optional[Mapping[str, Sequence[str]]] = None,
    columns: Optional[CorpusColumns] = None,
) -> Tuple[List[HeadlineRecord], IngestReport]:
    """
    Read headlines, keep liberal/conservative sources, tag topics

    Args:
        path: Headline CSV
        leanings: source -> liberal / conservative / center (center and
            unknown sources are dropped)
        topics: topic -> keywords; None disables topic filtering
        columns: Column names (id, text, source)

    Raises:
        DataError: Missing columns, duplicate ids or nothing left to keep
    """
    columns = columns or CorpusColumns()
    frame = _read_table(path)
    _require_columns(frame, [columns.text, columns.source], path)
    has_ids = columns.id in frame.columns
    folded = {source.strip().casefold(): leaning for source, leaning in leanings.items()}
    sequences = _keyword_sequences(topics) if topics is not None else None

    records: List[HeadlineRecord] = []
    dropped = {"empty_text": 0, "center_source": 0, "unknown_source": 0, "no_topic": 0}
    seen = set()
    for position, row_values in enumerate(frame.to_dict("records"), start=1):
        row_id = row_values[columns.id] if has_ids else str(position)
        text = row_values[columns.text].strip()
        leaning = folded.get(row_values[columns.source].strip().casefold())

        if not text:
            dropped["empty_text"] += 1
            continue
        if leaning is None:
            dropped["unknown_source"] += 1
            continue
        if leaning == "center":
            dropped["center_source"] += 1
            continue

        matched = _matching(token_list(text), sequences) if sequences is not None else []
        if sequences is not None and not matched:
            dropped["no_topic"] += 1
            continue
        if row_id in seen:
            raise DataError(f"{path}: duplicate id {row_id!r} (row {position})")
        seen.add(row_id)
        records.append(
            HeadlineRecord(
                id=row_id,
                text=text,
                source=row_values[columns.source].strip(),
                leaning=LEANING_LABELS[leaning],
                topic=matched[0] if matched else None,
                topics=matched,
            )
        )

    report = IngestReport(source_path=str(path), rows_read=len(frame), kept=len(records), dropped=dropped)
    logger.info(report.summary())
    if not records:
        raise DataError(f"{path}: no headlines left after filtering ({report.summary()})")
    return records, report


def ingest_corpus(
    path: PathLike, columns: Optional[CorpusColumns] = None
) -> Tuple[List[Tuple[str, str]], IngestReport]:
    """
    Plain (id, text) corpus; rows with empty text are dropped

    Raises:
        DataError: Missing columns, duplicate ids or no rows kept
    """
    columns = columns or CorpusColumns()
    frame = _read_table(path)
    _require_columns(frame, [columns.id, columns.text], path)

    documents = []
    empty = 0
    seen = set()
    for row_id, text in zip(frame[columns.id], frame[columns.text]):
        if not text.strip():
            empty += 1
            continue
        if row_id in seen:
            raise DataError(f"{path}: duplicate id {row_id!r}")
        seen.add(row_id)
        documents.append((row_id, text))

    report = IngestReport(source_path=str(path), rows_read=len(frame), kept=len(documents), dropped={"empty_text": empty})
    if not documents:
        raise DataError(f"{path}: corpus has no documents with text")
    return documents, report


def _parse_count(value: str, column: str, row_id: str, path: PathLike) -> int:
    value = value.strip()
    if not value.isdigit():
        raise DataError(f"{path}: row {row_id!r}, column {column!r}: malformed count {value!r}")
    return int(value)


def ingest_annotations(
    path: PathLike,
    min_votes: int = config.DEFAULT_MIN_VOTES,
    columns: Optional[AnnotationColumns] = None,
    min_annotators: int = config.DEFAULT_MIN_ANNOTATORS,
) -> Tuple[AnnotationDataset, IngestReport]:
    """
    Read per-dimension vote counts and threshold them into labels

    A dimension is labelled 1 iff it has at least min_votes votes.

    Raises:
        DataError: Missing columns, malformed counts, votes above the
            annotator count, too few annotators, duplicate ids, empty file
    """
    if min_votes < 1:
        raise DataError("min_votes must be >= 1")
    columns = columns or AnnotationColumns()
    frame = _read_table(path)
    _require_columns(frame, [columns.id, columns.text, columns.annotator_count], path)

    reserved = {columns.id, columns.text, columns.annotator_count}
    vote_columns = columns.vote_columns or [c for c in frame.columns if c not in reserved]
    _require_columns(frame, vote_columns, path)
    if not vote_columns:
        raise DataError(f"{path}: no vote columns")
    if frame[columns.id].duplicated().any():
        duplicate = frame[columns.id][frame[columns.id].duplicated()].iloc[0]
        raise DataError(f"{path}: duplicate id {duplicate!r}")
    if frame.empty:
        raise DataError(f"{path}: no annotated rows")

    records = []
    for _, row in frame.iterrows():
        row_id = row[columns.id]
        annotators = _parse_count(row[columns.annotator_count], columns.annotator_count, row_id, path)
        if annotators < min_annotators:
            raise DataError(f"{path}: row {row_id!r} has {annotators} annotators, need at least {min_annotators}")
        votes = {column: _parse_count(row[column], column, row_id, path) for column in vote_columns}
        over = [column for column, count in votes.items() if count > annotators]
        if over:
            raise DataError(
                f"{path}: row {row_id!r}: votes exceed annotator count {annotators} in {', '.join(over)}"
            )
        records.append(AnnotationRecord(id=row_id, text=row[columns.text], votes=votes, annotator_count=annotators))

    dataset = annotation_dataset(records, min_votes)
    return dataset, IngestReport(source_path=str(path), rows_read=len(frame), kept=len(records))


def annotation_dataset(records: Sequence[AnnotationRecord], min_votes: int) -> AnnotationDataset:
    ids = [record.id for record in records]
    votes = pd.DataFrame([record.votes for record in records], index=ids).astype(int)
    labels = (votes >= min_votes).astype(int)
    return AnnotationDataset(tuple(ids), tuple(record.text for record in records), votes, labels, min_votes)


def apply_label_groups(dataset: AnnotationDataset, groups: Mapping[str, Sequence[str]]) -> AnnotationDataset:
    """
    Collapse vote columns into groups: group label = any member label,
    group votes = sum of member votes

    Raises:
        DataError: A group names an unknown vote column
    """
    unknown = sorted({m for members in groups.values() for m in members} - set(dataset.votes.columns))
    if unknown:
        raise DataError(f"label groups name unknown vote columns: {', '.join(unknown)}")
    votes = pd.DataFrame(
        {group: dataset.votes[list(members)].sum(axis=1) for group, members in groups.items()},
        index=list(dataset.ids),
    )
    labels = pd.DataFrame(
        {group: dataset.labels[list(members)].max(axis=1) for group, members in groups.items()},
        index=list(dataset.ids),
    )
    return AnnotationDataset(dataset.ids, dataset.texts, votes.astype(int), labels.astype(int), dataset.min_votes)


def ingest_external_features(
    path: PathLike, corpus_ids: Optional[Sequence[str]] = None
) -> Tuple[FeatureMatrix, IngestReport]:
    """
    Read precomputed document vectors: id column then k numeric columns

    Columns are named f1..fk whatever the header says. With corpus_ids the
    rows are aligned to that order and ids absent from the corpus are reported.

    Raises:
        DataError: Arity mismatch, non-numeric or non-finite values,
            duplicate ids, zero overlap with the corpus
    """
    frame = _read_table(path)
    if frame.shape[1] < 2:
        raise DataError(f"{path}: need an id column and at least one feature column")
    ids = [str(i) for i in frame.iloc[:, 0]]
    if len(set(ids)) != len(ids):
        duplicate = next(i for i in ids if ids.count(i) > 1)
        raise DataError(f"{path}: duplicate id {duplicate!r}")

    rows = []
    width = frame.shape[1] - 1
    for row_id, cells in zip(ids, frame.iloc[:, 1:].itertuples(index=False)):
        if any(not isinstance(cell, str) or cell == "" for cell in cells):
            raise DataError(f"{path}: row {row_id!r} has fewer than {width} feature values")
        try:
            values = [float(cell) for cell in cells]
        except ValueError as e:
            raise DataError(f"{path}: row {row_id!r}: {e}") from e
        if not all(np.isfinite(values)):
            raise DataError(f"{path}: row {row_id!r} has non-finite values")
        rows.append(values)

    names = tuple(f"f{i}" for i in range(1, width + 1))
    matrix = FeatureMatrix(tuple(ids), np.array(rows, dtype=np.float64).reshape(len(ids), width), names)
    if corpus_ids is None:
        return matrix, IngestReport(source_path=str(path), rows_read=len(ids), kept=len(ids))

    known = set(ids)
    matched = [row_id for row_id in corpus_ids if row_id in known]
    if not matched:
        raise DataError(f"{path}: no feature row matches a corpus id")
    corpus = set(corpus_ids)
    unmatched = [row_id for row_id in ids if row_id not in corpus]
    if unmatched:
        logger.warning("%s: %d feature rows have no corpus document", path, len(unmatched))
    report = IngestReport(
        source_path=str(path),
        rows_read=len(ids),
        kept=len(matched),
        dropped={"unmatched_id": len(unmatched)},
        unmatched_ids=unmatched,
    )
    return matrix.subset(matched), report


def write_feature_matrix(matrix: FeatureMatrix, path: PathLike) -> None:
    """id + feature columns, floats in shortest round-trip form"""
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    matrix.to_frame().to_csv(path, index=False, lineterminator="\n")
