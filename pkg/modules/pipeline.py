"""
Experiment pipeline
Wires ingestion, scoring, training and evaluation into the moral-foundation
experiment, the headline partisanship experiment and the correlation report

Feature modes:
    frame_axis  Bias/Intensity per axis; baselines from the training texts
    external    precomputed document vectors (partisanship: MF likelihoods
                of the annotation-trained models over those vectors)
    combined    frame_axis columns followed by external columns
"""
import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from models.experiment import ExperimentConfig, FeatureMode
from models.records import HeadlineRecord
from models.reports import MetricsReport
from modules.axes import AxisSet, build_axis_set, load_axis_set
from modules.classifier import (
    LogisticModel,
    baseline_predict,
    baseline_train,
    coefficient_intervals,
    predict_labels,
    train_logistic,
    train_multilabel,
    with_intervals,
)
from modules.embedding_store import EmbeddingStore, load_embeddings
from modules.errors import AxisError, DataError, ModeUnavailableError, SingularInformationError
from modules.evaluation import (
    CorrelationMatrix,
    correlation_matrix,
    mean_metrics,
    metrics,
    repeated_split_evaluation,
)
from modules.features import FeatureMatrix
from modules.ingestion import (
    AnnotationDataset,
    apply_label_groups,
    ingest_annotations,
    ingest_external_features,
    ingest_headlines,
    load_label_groups,
    load_leanings,
    load_topics,
)
from modules.lexicon import default_lexicon, parse_lexicon
from modules.persistence import MFArtifacts, load_artifacts
from modules.scorer import FrameScorer, TokenBag, frame_feature_matrix, tokenize

logger = logging.getLogger(__name__)

BASELINE_ROW = "baseline"
METRIC_COLUMNS = ["precision", "recall", "f1", "accuracy", "tp", "fp", "tn", "fn", "splits"]
RATE_NAMES = ["precision", "recall", "f1", "accuracy"]
BASELINE_COLUMNS = [f"baseline_{name}" for name in RATE_NAMES]
AVERAGE_ROW = "AVG"
MODE_ORDER = [FeatureMode.FRAME_AXIS, FeatureMode.EXTERNAL, FeatureMode.COMBINED]


@dataclass
class ExperimentResult:
    """Tables produced by one experiment plus the counts echoed in the run manifest"""
    tables: Dict[str, pd.DataFrame] = field(default_factory=dict)
    correlations: Dict[str, CorrelationMatrix] = field(default_factory=dict)
    row_counts: Dict[str, Any] = field(default_factory=dict)
    seeds: List[int] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)
    artifacts: Optional[MFArtifacts] = None


@dataclass
class FrameInputs:
    store: EmbeddingStore
    axes: AxisSet
    scorer: FrameScorer

    @classmethod
    def create(cls, store: EmbeddingStore, axes: AxisSet) -> "FrameInputs":
        if axes.embedding_dimension != store.dimension:
            raise AxisError(
                f"axis set has dimension {axes.embedding_dimension}, embeddings have {store.dimension}"
            )
        return cls(store, axes, FrameScorer(axes, store))


def load_frame_inputs(config: ExperimentConfig, counts: Dict[str, Any]) -> Optional[FrameInputs]:
    """Embeddings plus saved or freshly built axes; None when no embeddings are configured"""
    if config.embeddings is None:
        return None
    store, report = load_embeddings(config.embeddings)
    counts["embeddings"] = report.model_dump(exclude={"source_path"})
    if config.axes is not None:
        axes = load_axis_set(config.axes)
    else:
        lexicon = parse_lexicon(config.lexicon) if config.lexicon else default_lexicon()
        axes = build_axis_set(store, lexicon)
    return FrameInputs.create(store, axes)


class FeatureSource:
    """
    Builds the feature matrix of one mode for any set of document ids

    Frame-axis baselines are recomputed from the given baseline ids, so a
    training split never sees test texts.
    """

    def __init__(
        self,
        mode: FeatureMode,
        bags: Mapping[str, TokenBag],
        frame: Optional[FrameInputs] = None,
        external: Optional[FeatureMatrix] = None,
    ):
        if mode != FeatureMode.EXTERNAL and frame is None:
            raise ModeUnavailableError(f"mode {mode.value} needs embeddings")
        if mode != FeatureMode.FRAME_AXIS and external is None:
            raise ModeUnavailableError(f"mode {mode.value} needs external features")
        self.mode = mode
        self.bags = bags
        self.frame = frame
        self.external = external
        if frame is not None:
            frame.scorer.prime(bags.values())

    @property
    def ids(self) -> List[str]:
        """Documents that have features in this mode, in corpus order"""
        if self.external is None:
            return list(self.bags)
        known = set(self.external.ids)
        return [doc_id for doc_id in self.bags if doc_id in known]

    def frame_matrix(self, ids: Sequence[str], baseline_ids: Sequence[str]) -> Tuple[FeatureMatrix, AxisSet]:
        axes = self.frame.scorer.compute_baselines([self.bags[doc_id] for doc_id in baseline_ids])
        scored = self.frame.scorer.rebased(axes).score_documents([(doc_id, self.bags[doc_id]) for doc_id in ids])
        return frame_feature_matrix(scored), axes

    def matrix(self, ids: Sequence[str], baseline_ids: Sequence[str]) -> FeatureMatrix:
        if self.mode == FeatureMode.EXTERNAL:
            return self.external.subset(ids)
        frame, _ = self.frame_matrix(ids, baseline_ids)
        if self.mode == FeatureMode.FRAME_AXIS:
            return frame
        return frame.concat(self.external.subset(ids))


def resolve_modes(requested: Optional[FeatureMode], reasons: Mapping[FeatureMode, Optional[str]]) -> List[FeatureMode]:
    """
    Modes to run: the requested one, or every available one

    Args:
        requested: Mode asked for on the command line / config, or None
        reasons: mode -> why it is unavailable (None when available)

    Raises:
        ModeUnavailableError: The requested mode (or every mode) is unavailable
    """
    if requested is not None:
        if reasons.get(requested):
            raise ModeUnavailableError(f"mode {requested.value} unavailable: {reasons[requested]}")
        return [requested]
    modes = [mode for mode in MODE_ORDER if not reasons.get(mode)]
    for mode in MODE_ORDER:
        if reasons.get(mode):
            logger.warning("Skipping mode %s: %s", mode.value, reasons[mode])
    if not modes:
        raise ModeUnavailableError("no feature mode has its inputs: " + "; ".join(
            f"{mode.value}: {reason}" for mode, reason in reasons.items()
        ))
    return modes


def _metrics_row(key: Dict[str, str], report: MetricsReport) -> Dict[str, Any]:
    return {**key, **report.as_row()}


def _table(rows: List[Dict[str, Any]], key_columns: List[str]) -> pd.DataFrame:
    return pd.DataFrame(rows, columns=key_columns + METRIC_COLUMNS)


def _baseline_columns(report: MetricsReport) -> Dict[str, float]:
    return {f"baseline_{name}": getattr(report, name) for name in RATE_NAMES}


def _average_row(
    key: Dict[str, str], reports: Sequence[MetricsReport], baselines: Sequence[MetricsReport]
) -> Dict[str, Any]:
    """Unweighted mean of the rates over dimensions; confusion counts summed"""
    row: Dict[str, Any] = dict(key)
    for name in RATE_NAMES:
        row[name] = float(np.mean([getattr(report, name) for report in reports]))
    row["tp"] = sum(report.true_positives for report in reports)
    row["fp"] = sum(report.false_positives for report in reports)
    row["tn"] = sum(report.true_negatives for report in reports)
    row["fn"] = sum(report.false_negatives for report in reports)
    row["splits"] = reports[0].splits
    for name in RATE_NAMES:
        row[f"baseline_{name}"] = float(np.mean([getattr(report, name) for report in baselines]))
    return row


def load_annotations(config: ExperimentConfig, counts: Dict[str, Any]) -> AnnotationDataset:
    if config.annotations is None:
        raise DataError("an annotation file is required (--annotations)")
    dataset, report = ingest_annotations(
        config.annotations, config.min_votes, config.annotation_columns, config.min_annotators
    )
    if config.label_groups is not None:
        dataset = apply_label_groups(dataset, load_label_groups(config.label_groups))
    counts["annotations"] = report.model_dump(exclude={"source_path", "unmatched_ids"})
    counts["dimensions"] = dataset.dimensions
    return dataset


def _annotation_external(
    config: ExperimentConfig, dataset: AnnotationDataset, counts: Dict[str, Any]
) -> Optional[FeatureMatrix]:
    if config.features is None:
        return None
    matrix, report = ingest_external_features(config.features, dataset.ids)
    counts["annotation_features"] = report.model_dump(exclude={"source_path", "unmatched_ids"})
    return matrix


def _mode_reasons(frame: Optional[FrameInputs], external: Optional[FeatureMatrix]) -> Dict[FeatureMode, Optional[str]]:
    no_frame = None if frame is not None else "no embeddings (--embeddings)"
    no_external = None if external is not None else "no external features (--features)"
    return {
        FeatureMode.FRAME_AXIS: no_frame,
        FeatureMode.EXTERNAL: no_external,
        FeatureMode.COMBINED: no_frame or no_external,
    }


def _evaluate_binary(
    source: FeatureSource,
    targets: Mapping[str, Mapping[str, int]],
    config: ExperimentConfig,
) -> Callable[[List[str], List[str], int], Dict[str, MetricsReport]]:
    """Split evaluator training one model per target on the split's training rows"""

    def evaluate(train_ids: List[str], test_ids: List[str], seed: int) -> Dict[str, MetricsReport]:
        features = source.matrix(train_ids + test_ids, baseline_ids=train_ids)
        X_train, X_test = features.subset(train_ids), features.subset(test_ids)
        reports = {}
        for target, labels in targets.items():
            model = train_logistic(X_train, [labels[i] for i in train_ids], config.classifier, target=target)
            reports[target] = metrics(predict_labels(model, X_test), [labels[i] for i in test_ids])
        return reports

    return evaluate


def _evaluate_baseline(
    targets: Mapping[str, Mapping[str, int]]
) -> Callable[[List[str], List[str], int], Dict[str, MetricsReport]]:
    def evaluate(train_ids: List[str], test_ids: List[str], seed: int) -> Dict[str, MetricsReport]:
        reports = {}
        for target, labels in targets.items():
            model = baseline_train([labels[i] for i in train_ids], seed)
            reports[target] = metrics(baseline_predict(model, len(test_ids)), [labels[i] for i in test_ids])
        return reports

    return evaluate


def _repeated(
    ids: Sequence[str],
    evaluate: Callable[[List[str], List[str], int], Dict[str, MetricsReport]],
    config: ExperimentConfig,
) -> Dict[str, MetricsReport]:
    runs = repeated_split_evaluation(list(ids), config.splits, config.split, evaluate, config.workers)
    return {target: mean_metrics([run[target] for run in runs]) for target in runs[0]}


def run_mf_experiment(config: ExperimentConfig) -> ExperimentResult:
    """
    Per-dimension repeated-split evaluation on the annotation corpus

    Returns:
        ExperimentResult with table "mf_metrics": an AVG row per feature mode
        (mean over dimensions), then one row per (dimension, feature mode).
        Frequency-baseline rates sit in the baseline_* columns, evaluated on
        the same ids and splits as the models of that row
    """
    result = ExperimentResult(seeds=config.seeds)
    counts = result.row_counts
    dataset = load_annotations(config, counts)
    frame = load_frame_inputs(config, counts)
    external = _annotation_external(config, dataset, counts)
    modes = resolve_modes(config.mode, _mode_reasons(frame, external))

    bags = {doc_id: tokenize(text) for doc_id, text in dataset.documents()}
    targets = {
        dimension: dict(zip(dataset.ids, dataset.labels[dimension].tolist()))
        for dimension in dataset.dimensions
    }

    per_mode = {}
    baselines = {}
    baselines_by_ids: Dict[Tuple[str, ...], Dict[str, MetricsReport]] = {}
    for mode in modes:
        source = FeatureSource(mode, bags, frame, external)
        ids = source.ids
        counts[f"rows_{mode.value}"] = len(ids)
        logger.info("Evaluating %s features on %d documents", mode.value, len(ids))
        per_mode[mode] = _repeated(ids, _evaluate_binary(source, targets, config), config)
        # baseline on the same ids (and so the same splits) as the models beside it
        key = tuple(ids)
        if key not in baselines_by_ids:
            baselines_by_ids[key] = _repeated(ids, _evaluate_baseline(targets), config)
        baselines[mode] = baselines_by_ids[key]

    rows = []
    for mode in modes:
        rows.append(_average_row(
            {"dimension": AVERAGE_ROW, "features": mode.value},
            [per_mode[mode][dimension] for dimension in dataset.dimensions],
            [baselines[mode][dimension] for dimension in dataset.dimensions],
        ))
    for dimension in dataset.dimensions:
        for mode in modes:
            row = _metrics_row({"dimension": dimension, "features": mode.value}, per_mode[mode][dimension])
            row.update(_baseline_columns(baselines[mode][dimension]))
            rows.append(row)
    result.tables["mf_metrics"] = pd.DataFrame(
        rows, columns=["dimension", "features"] + METRIC_COLUMNS + BASELINE_COLUMNS
    )
    return result


def _attach_intervals(model: LogisticModel, X: FeatureMatrix, y: Sequence[int], level: float) -> LogisticModel:
    try:
        return with_intervals(model, coefficient_intervals(model, X, y, level))
    except SingularInformationError as e:
        logger.warning("%s: no coefficient intervals: %s", model.target, e)
        return model


def train_mf_models(
    config: ExperimentConfig,
    mode: Optional[FeatureMode] = None,
    dataset: Optional[AnnotationDataset] = None,
    counts: Optional[Dict[str, Any]] = None,
) -> MFArtifacts:
    """
    Fit one model per dimension on the whole annotation set

    Frame-axis baselines come from every annotation text and are stored with
    the axes, so later scoring of other corpora reuses them.
    """
    counts = {} if counts is None else counts
    dataset = dataset if dataset is not None else load_annotations(config, counts)
    frame = load_frame_inputs(config, counts) if mode != FeatureMode.EXTERNAL else None
    external = _annotation_external(config, dataset, counts) if mode != FeatureMode.FRAME_AXIS else None
    reasons = _mode_reasons(frame, external)
    mode = resolve_modes(mode or config.mode, reasons)[0]

    bags = {doc_id: tokenize(text) for doc_id, text in dataset.documents()}
    source = FeatureSource(mode, bags, frame, external)
    ids = source.ids
    X = source.matrix(ids, baseline_ids=ids)
    axes = source.frame_matrix(ids, ids)[1] if mode != FeatureMode.EXTERNAL else None

    labels = dataset.label_columns(ids)
    models = train_multilabel(X, labels, config.classifier, config.workers)
    models = {
        dimension: _attach_intervals(model, X, labels[dimension], config.ci_level)
        for dimension, model in models.items()
    }
    counts["training_rows"] = len(ids)
    counts["mode"] = mode.value
    return MFArtifacts(mode=mode, models=models, axes=axes)


def model_input_matrix(
    artifacts: MFArtifacts,
    documents: Sequence[Tuple[str, str]],
    store: Optional[EmbeddingStore],
    external: Optional[FeatureMatrix],
) -> FeatureMatrix:
    """
    Features of other documents in the models' own feature space

    Frame-axis features reuse the baselines stored with the artifacts.

    Raises:
        ModeUnavailableError: The inputs the models need are missing
    """
    frame_part = None
    if artifacts.mode != FeatureMode.EXTERNAL:
        if store is None:
            raise ModeUnavailableError(f"{artifacts.mode.value} models need embeddings")
        scorer = FrameScorer(artifacts.axes, store)
        frame_part = frame_feature_matrix(
            scorer.score_documents([(doc_id, tokenize(text)) for doc_id, text in documents])
        )
        if artifacts.mode == FeatureMode.FRAME_AXIS:
            return frame_part
    if external is None:
        raise ModeUnavailableError(f"{artifacts.mode.value} models need external features")
    known = set(external.ids)
    external_part = external.subset([doc_id for doc_id, _ in documents if doc_id in known])
    return external_part if frame_part is None else frame_part.concat(external_part)


def likelihood_matrix(artifacts: MFArtifacts, X: FeatureMatrix) -> FeatureMatrix:
    """Column <dimension>_likelihood = P(dimension | row) for every model"""
    columns = []
    for dimension, model in artifacts.models.items():
        if X.feature_names != model.feature_names:
            raise DataError(
                f"{dimension}: model expects {len(model.feature_names)} features "
                f"({', '.join(model.feature_names[:3])}...), got {X.n_features}"
            )
        columns.append(model.predict_proba_matrix(X.values))
    values = np.column_stack(columns) if columns else np.zeros((X.n_rows, 0))
    names = tuple(f"{dimension}_likelihood" for dimension in artifacts.models)
    return FeatureMatrix(X.ids, values, names)


def _headline_groups(records: Sequence[HeadlineRecord], topics_enabled: bool) -> Dict[str, List[HeadlineRecord]]:
    if not topics_enabled:
        return {"all": list(records)}
    groups: Dict[str, List[HeadlineRecord]] = {}
    for record in records:
        for topic in record.topics:
            groups.setdefault(topic, []).append(record)
    return groups


def _topics(config: ExperimentConfig) -> Optional[Dict[str, List[str]]]:
    if config.topic_keywords is not None:
        return config.topic_keywords
    if config.topics is not None:
        return load_topics(config.topics)
    return None


def load_headlines(config: ExperimentConfig, counts: Dict[str, Any]) -> Tuple[List[HeadlineRecord], bool]:
    if config.corpus is None:
        raise DataError("a headline corpus is required (--corpus)")
    leanings = config.source_leanings if config.source_leanings is not None else load_leanings(config.leanings)
    topics = _topics(config)
    records, report = ingest_headlines(config.corpus, leanings, topics, config.corpus_columns)
    counts["headlines"] = report.model_dump(exclude={"source_path", "unmatched_ids"})
    return records, topics is not None


def _headline_external(config: ExperimentConfig, ids: Sequence[str], counts: Dict[str, Any]) -> Optional[FeatureMatrix]:
    path = config.headline_features or config.features
    if path is None:
        return None
    try:
        matrix, report = ingest_external_features(path, ids)
    except DataError as e:
        logger.warning("No usable headline features in %s: %s", path, e)
        return None
    counts["headline_features"] = report.model_dump(exclude={"source_path", "unmatched_ids"})
    return matrix


def _mf_artifacts(config: ExperimentConfig, mode: Optional[FeatureMode], counts: Dict[str, Any]) -> MFArtifacts:
    if config.artifacts is not None:
        return load_artifacts(config.artifacts)
    return train_mf_models(config, mode=mode, counts=counts.setdefault("mf_training", {}))


def _likelihood_features(
    config: ExperimentConfig, headline_external: Optional[FeatureMatrix], counts: Dict[str, Any]
) -> Tuple[Optional[FeatureMatrix], Optional[str]]:
    """MF likelihoods over headlines, or (None, reason)"""
    if headline_external is None:
        return None, "no external headline features (--features / --headline-features)"
    if config.artifacts is None and (config.annotations is None or config.features is None):
        return None, "no MF models (--artifacts, or --annotations with --features)"
    artifacts = _mf_artifacts(config, FeatureMode.EXTERNAL, counts)
    if artifacts.mode != FeatureMode.EXTERNAL:
        return None, f"saved MF models use {artifacts.mode.value} features, not external vectors"
    return likelihood_matrix(artifacts, headline_external), None


def _coefficient_rows(topic: str, model: LogisticModel, intervals, axis_names: Sequence[str]) -> List[Dict[str, Any]]:
    by_feature = {interval.feature: interval for interval in intervals}
    rows = []
    for name in axis_names:
        for measure in ("bias", "intensity"):
            interval = by_feature[f"{name}_{measure}"]
            rows.append({
                "topic": topic,
                "foundation": name,
                "measure": measure,
                "coefficient": interval.estimate,
                "low": interval.low,
                "high": interval.high,
                "significant": interval.significant,
                "feature_scale": "standardized",
            })
    return rows


def run_partisanship_experiment(config: ExperimentConfig) -> ExperimentResult:
    """
    Liberal-vs-conservative headline classification per topic and feature mode

    Returns:
        ExperimentResult with tables "partisan_metrics" (topic x features,
        plus a baseline row per topic) and, when frame-axis features ran,
        "partisan_coefficients" (per foundation Bias/Intensity coefficients
        with Wald intervals, fit on each topic's full headline set)
    """
    result = ExperimentResult(seeds=config.seeds)
    counts = result.row_counts
    records, topics_enabled = load_headlines(config, counts)
    headline_ids = [record.id for record in records]

    frame = load_frame_inputs(config, counts)
    external = _headline_external(config, headline_ids, counts)
    likelihoods, likelihood_reason = (None, "not requested")
    if config.mode != FeatureMode.FRAME_AXIS:
        likelihoods, likelihood_reason = _likelihood_features(config, external, counts)

    no_frame = None if frame is not None else "no embeddings (--embeddings)"
    reasons = {
        FeatureMode.FRAME_AXIS: no_frame,
        FeatureMode.EXTERNAL: likelihood_reason if likelihoods is None else None,
        FeatureMode.COMBINED: no_frame or (likelihood_reason if likelihoods is None else None),
    }
    modes = resolve_modes(config.mode, reasons)
    for mode, reason in reasons.items():
        if reason and mode not in modes:
            result.notes.append(f"skipped {mode.value}: {reason}")

    metric_rows: List[Dict[str, Any]] = []
    coefficient_rows: List[Dict[str, Any]] = []
    for topic, group in _headline_groups(records, topics_enabled).items():
        bags = {record.id: tokenize(record.text) for record in group}
        targets = {"leaning": {record.id: record.leaning for record in group}}
        counts.setdefault("topics", {})[topic] = len(group)
        for mode in modes:
            source = FeatureSource(mode, bags, frame, likelihoods)
            if len(source.ids) < 2:
                raise DataError(f"topic {topic!r}: fewer than 2 headlines have {mode.value} features")
            logger.info("Topic %s: evaluating %s features on %d headlines", topic, mode.value, len(source.ids))
            report = _repeated(source.ids, _evaluate_binary(source, targets, config), config)["leaning"]
            metric_rows.append(_metrics_row({"topic": topic, "features": mode.value}, report))
        baseline = _repeated(list(bags), _evaluate_baseline(targets), config)["leaning"]
        metric_rows.append(_metrics_row({"topic": topic, "features": BASELINE_ROW}, baseline))

        if FeatureMode.FRAME_AXIS in modes:
            source = FeatureSource(FeatureMode.FRAME_AXIS, bags, frame)
            X = source.matrix(source.ids, baseline_ids=source.ids)
            y = [targets["leaning"][doc_id] for doc_id in source.ids]
            model = train_logistic(X, y, config.classifier, target=f"{topic}_leaning")
            try:
                intervals = coefficient_intervals(model, X, y, config.ci_level)
            except SingularInformationError as e:
                logger.warning("Topic %s: no coefficient intervals: %s", topic, e)
                result.notes.append(f"topic {topic}: no coefficient intervals ({', '.join(e.columns)})")
                continue
            coefficient_rows.extend(_coefficient_rows(topic, model, intervals, frame.axes.names))

    result.tables["partisan_metrics"] = _table(metric_rows, ["topic", "features"])
    if coefficient_rows:
        result.tables["partisan_coefficients"] = pd.DataFrame(coefficient_rows)
    return result


def run_correlation_report(config: ExperimentConfig) -> ExperimentResult:
    """
    Pearson matrices over (a) raw vote counts, (b) MF likelihoods on the
    annotation corpus and (c) MF likelihoods on headlines, as far as the
    inputs allow
    """
    result = ExperimentResult()
    counts = result.row_counts
    dataset = None
    if config.annotations is not None:
        dataset = load_annotations(config, counts)
        result.correlations["correlation_votes"] = correlation_matrix(
            {dimension: dataset.votes[dimension].tolist() for dimension in dataset.dimensions}
        )

    if config.artifacts is None and dataset is None:
        if not result.correlations:
            raise DataError("correlate needs --annotations or --artifacts")
        return result

    if config.artifacts is not None:
        artifacts = load_artifacts(config.artifacts)
    else:
        try:
            artifacts = train_mf_models(config, dataset=dataset, counts=counts.setdefault("mf_training", {}))
        except ModeUnavailableError as e:
            if config.mode is not None:
                raise
            logger.warning("Skipping likelihood correlations: %s", e)
            result.notes.append(f"skipped likelihoods: {e}")
            return result
    result.artifacts = artifacts
    store = None
    if artifacts.mode != FeatureMode.EXTERNAL and config.embeddings is not None:
        store, report = load_embeddings(config.embeddings)
        counts["embeddings"] = report.model_dump(exclude={"source_path"})

    if dataset is not None:
        external = _annotation_external(config, dataset, counts)
        try:
            X = model_input_matrix(artifacts, dataset.documents(), store, external)
        except ModeUnavailableError as e:
            logger.warning("Skipping annotation likelihood correlations: %s", e)
            result.notes.append(f"skipped annotation likelihoods: {e}")
        else:
            result.correlations["correlation_annotation_likelihoods"] = _likelihood_correlation(artifacts, X)

    if config.corpus is not None:
        records, _ = load_headlines(config, counts)
        documents = [(record.id, record.text) for record in records]
        external = _headline_external(config, [doc_id for doc_id, _ in documents], counts)
        try:
            X = model_input_matrix(artifacts, documents, store, external)
        except ModeUnavailableError as e:
            logger.warning("Skipping headline likelihood correlations: %s", e)
            result.notes.append(f"skipped headline likelihoods: {e}")
        else:
            result.correlations["correlation_headline_likelihoods"] = _likelihood_correlation(artifacts, X)
    return result


def _likelihood_correlation(artifacts: MFArtifacts, X: FeatureMatrix) -> CorrelationMatrix:
    likelihoods = likelihood_matrix(artifacts, X)
    return correlation_matrix(
        {dimension: likelihoods.values[:, i] for i, dimension in enumerate(artifacts.models)}
    )
