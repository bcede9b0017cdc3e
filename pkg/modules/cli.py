"""
Command line interface
Subcommands: build-axes, score, train-mf, eval-mf, partisan, correlate

Exit codes: 0 success, 1 usage or configuration error, 2 data error.
"""
import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import pandas as pd
from pydantic import ValidationError

import config
from models.experiment import ExperimentConfig, FeatureMode
from modules.axes import build_axis_set, load_axis_set, save_axis_set
from modules.embedding_store import load_embeddings
from modules.errors import MoralFramesError
from modules.ingestion import ingest_corpus
from modules.lexicon import coverage, default_lexicon, parse_lexicon
from modules.persistence import save_artifacts
from modules.pipeline import (
    ExperimentResult,
    run_correlation_report,
    run_mf_experiment,
    run_partisanship_experiment,
    train_mf_models,
)
from modules.reports import write_correlation, write_json, write_run_manifest, write_table, write_table_csv
from modules.scorer import FrameScorer, scores_frame, tokenize

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2

MANIFEST_FILE = "run_manifest.json"

# Inputs a subcommand cannot run without
REQUIRED_INPUTS = {
    "build-axes": ["embeddings"],
    "score": ["embeddings", "corpus"],
    "train-mf": ["annotations"],
    "eval-mf": ["annotations"],
    "partisan": ["corpus"],
    "correlate": [],
}

# flag dest -> config key (nested keys use dots)
FLAG_KEYS = {
    "embeddings": "embeddings",
    "lexicon": "lexicon",
    "corpus": "corpus",
    "annotations": "annotations",
    "features": "features",
    "headline_features": "headline_features",
    "leanings": "leanings",
    "topics": "topics",
    "label_groups": "label_groups",
    "axes": "axes",
    "artifacts": "artifacts",
    "out": "out",
    "mode": "mode",
    "train_fraction": "split.train_fraction",
    "seed": "split.seed",
    "splits": "splits",
    "min_votes": "min_votes",
    "workers": "workers",
}


class UsageError(Exception):
    """Bad command line or configuration"""
    pass


class ArgumentParser(argparse.ArgumentParser):
    """argparse with usage errors mapped to exit code 1"""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> ArgumentParser:
    parser = ArgumentParser(prog="moral_frames", description=config.DESCRIPTION.strip().splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {config.VERSION}")
    subparsers = parser.add_subparsers(dest="command", metavar="COMMAND")
    subparsers.required = True

    common = ArgumentParser(add_help=False)
    common.add_argument("--embeddings", metavar="PATH", help="word-vector text file")
    common.add_argument("--lexicon", metavar="PATH", help="lexicon JSON (default: bundled lexicon)")
    common.add_argument("--corpus", metavar="PATH", help="headline / document CSV")
    common.add_argument("--annotations", metavar="PATH", help="annotation vote table (CSV or TSV)")
    common.add_argument("--features", metavar="PATH", help="external document vectors (CSV)")
    common.add_argument("--headline-features", metavar="PATH", help="external vectors for headlines")
    common.add_argument("--leanings", metavar="PATH", help="source leaning map JSON")
    common.add_argument("--topics", metavar="PATH", help="topic keyword JSON")
    common.add_argument("--label-groups", metavar="PATH", help="vote column groups JSON")
    common.add_argument("--axes", metavar="PATH", help="saved axis set JSON")
    common.add_argument("--artifacts", metavar="DIR", help="saved moral-foundation models")
    common.add_argument("--mode", choices=[mode.value for mode in FeatureMode])
    common.add_argument("--train-fraction", type=float, metavar="R")
    common.add_argument("--splits", type=int, metavar="N")
    common.add_argument("--seed", type=int, metavar="N")
    common.add_argument("--min-votes", type=int, metavar="N")
    common.add_argument("--workers", type=int, metavar="N")
    common.add_argument("--out", metavar="DIR", help="output directory")
    common.add_argument("--config", metavar="PATH", help="JSON config overriding flags")

    helps = {
        "build-axes": "build semantic axes from embeddings and a lexicon",
        "score": "score a corpus with framing Bias and Intensity",
        "train-mf": "train moral-foundation classifiers on annotations",
        "eval-mf": "repeated-split evaluation of moral-foundation classifiers",
        "partisan": "headline partisanship classification per topic",
        "correlate": "correlation matrices over votes and likelihoods",
    }
    for name, text in helps.items():
        subparsers.add_parser(name, parents=[common], help=text, description=text)
    return parser


def _set_nested(target: Dict[str, Any], dotted: str, value: Any) -> None:
    keys = dotted.split(".")
    for key in keys[:-1]:
        target = target.setdefault(key, {})
    target[keys[-1]] = value


def _merge(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    merged = dict(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _merge(merged[key], value)
        else:
            merged[key] = value
    return merged


def build_config(args: argparse.Namespace) -> ExperimentConfig:
    """
    Flags first, then the --config document on top

    Raises:
        UsageError: Unreadable config file or missing required inputs
        ValidationError: Invalid values or missing referenced files
    """
    values: Dict[str, Any] = {}
    for dest, key in FLAG_KEYS.items():
        value = getattr(args, dest, None)
        if value is not None:
            _set_nested(values, key, value)

    if args.config:
        try:
            document = json.loads(Path(args.config).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as e:
            raise UsageError(f"cannot read config {args.config}: {e}") from e
        if not isinstance(document, dict):
            raise UsageError(f"config {args.config} must be a JSON object")
        values = _merge(values, document)

    experiment = ExperimentConfig.model_validate(values)
    missing = [name for name in REQUIRED_INPUTS[args.command] if getattr(experiment, name) is None]
    if missing:
        raise UsageError(
            f"{args.command} needs " + ", ".join("--" + name.replace("_", "-") for name in missing)
        )
    return experiment


def _finish(command: str, experiment: ExperimentConfig, result: ExperimentResult, outputs: List[Path]) -> None:
    out = experiment.out
    manifest = write_run_manifest(
        command,
        experiment.model_dump(mode="json"),
        result.seeds,
        result.row_counts,
        outputs,
        out / MANIFEST_FILE,
        notes=result.notes,
    )
    for note in result.notes:
        print(f"⚠️  {note}")
    for path in outputs + [manifest]:
        print(f"✅ Wrote {path}")


def cmd_build_axes(experiment: ExperimentConfig) -> None:
    store, report = load_embeddings(experiment.embeddings)
    lexicon = parse_lexicon(experiment.lexicon) if experiment.lexicon else default_lexicon()
    axes = build_axis_set(store, lexicon)
    result = ExperimentResult(row_counts={"embeddings": report.model_dump(exclude={"source_path"})})

    if experiment.corpus is not None:
        documents, corpus_report = ingest_corpus(experiment.corpus, experiment.corpus_columns)
        axes = FrameScorer(axes, store).compute_baselines([tokenize(text) for _, text in documents])
        result.row_counts["corpus"] = corpus_report.model_dump(exclude={"source_path", "unmatched_ids"})

    lexicon_coverage = coverage(lexicon, store)
    axes_path = experiment.out / "axes.json"
    save_axis_set(axes, axes_path)
    coverage_path = write_json(lexicon_coverage.model_dump(), experiment.out / "lexicon_coverage.json")
    result.row_counts["lexicon_coverage"] = lexicon_coverage.summary()
    _finish("build-axes", experiment, result, [axes_path, coverage_path])


def cmd_score(experiment: ExperimentConfig) -> None:
    store, report = load_embeddings(experiment.embeddings)
    if experiment.axes is not None:
        axes = load_axis_set(experiment.axes)
    else:
        lexicon = parse_lexicon(experiment.lexicon) if experiment.lexicon else default_lexicon()
        axes = build_axis_set(store, lexicon)

    documents, corpus_report = ingest_corpus(experiment.corpus, experiment.corpus_columns)
    bags = [(doc_id, tokenize(text)) for doc_id, text in documents]
    scorer = FrameScorer(axes, store)
    if not axes.has_baselines():
        scorer = scorer.rebased(scorer.compute_baselines([bag for _, bag in bags]))
    scored = scorer.score_documents(bags)

    result = ExperimentResult(row_counts={
        "embeddings": report.model_dump(exclude={"source_path"}),
        "corpus": corpus_report.model_dump(exclude={"source_path", "unmatched_ids"}),
        "oov_only_documents": scored.oov_only_count,
    })
    if scored.oov_only_count:
        result.notes.append(f"{scored.oov_only_count} documents have no in-vocabulary tokens (scored 0, flagged oov_only)")

    scores_path = write_table_csv(scores_frame(scored), experiment.out / "scores.csv")
    axes_path = experiment.out / "axes.json"
    save_axis_set(scorer.axes, axes_path)
    _finish("score", experiment, result, [scores_path, axes_path])


def _interval_table(artifacts) -> pd.DataFrame:
    rows = []
    for dimension, model in artifacts.models.items():
        for interval in model.intervals or ():
            rows.append({"dimension": dimension, **interval.model_dump()})
    return pd.DataFrame(
        rows,
        columns=["dimension", "feature", "estimate", "std_error", "low", "high", "significant", "level"],
    )


def cmd_train_mf(experiment: ExperimentConfig) -> None:
    result = ExperimentResult()
    artifacts = train_mf_models(experiment, counts=result.row_counts)
    artifact_dir = save_artifacts(artifacts, experiment.out / "artifacts")
    intervals_path = write_table_csv(_interval_table(artifacts), experiment.out / "mf_coefficients.csv")
    _finish("train-mf", experiment, result, [artifact_dir, intervals_path])


def _write_tables(experiment: ExperimentConfig, result: ExperimentResult) -> List[Path]:
    outputs: List[Path] = []
    for name, table in result.tables.items():
        outputs.extend(write_table(table, experiment.out / name))
    for name, matrix in result.correlations.items():
        outputs.extend(write_correlation(matrix, experiment.out / name))
    return outputs


def cmd_eval_mf(experiment: ExperimentConfig) -> None:
    result = run_mf_experiment(experiment)
    _finish("eval-mf", experiment, result, _write_tables(experiment, result))


def cmd_partisan(experiment: ExperimentConfig) -> None:
    result = run_partisanship_experiment(experiment)
    _finish("partisan", experiment, result, _write_tables(experiment, result))


def cmd_correlate(experiment: ExperimentConfig) -> None:
    result = run_correlation_report(experiment)
    _finish("correlate", experiment, result, _write_tables(experiment, result))


COMMANDS = {
    "build-axes": cmd_build_axes,
    "score": cmd_score,
    "train-mf": cmd_train_mf,
    "eval-mf": cmd_eval_mf,
    "partisan": cmd_partisan,
    "correlate": cmd_correlate,
}


def configure_logging(level: str = config.LOG_LEVEL) -> None:
    logging.basicConfig(
        level=getattr(logging, level, logging.WARNING),
        format="%(levelname)s %(name)s: %(message)s",
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Parse, validate, run; returns the process exit code"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    configure_logging()

    try:
        experiment = build_config(args)
    except (UsageError, ValidationError) as e:
        print(f"❌ {args.command}: invalid configuration:\n{e}", file=sys.stderr)
        return EXIT_USAGE

    try:
        COMMANDS[args.command](experiment)
    except MoralFramesError as e:
        print(f"❌ {args.command}: {e}", file=sys.stderr)
        return EXIT_DATA
    return EXIT_OK
