"""Two-stage assessment workflow: semantic rules first, syntactic score second.

Stage precedence: whenever the semantic stage fires, the verdict is
overfitting and the syntactic stage is never consulted. A record whose
invariant inputs are missing or unreadable falls through to the syntactic
stage with stage="fallback".
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path
from typing import Optional

from .corpus import filter_by_methods, parse_invariant_file, split_method_ref
from .embeddings import EmbeddingVector, hashing_embed, load_embeddings
from .equivalence import SolverHook
from .errors import (
    EmptyManifest,
    EmptyModifiedSet,
    MissingInputs,
    ModelRequired,
    PatchCheckError,
)
from .harness import (
    INVARIANT_SLOTS,
    ConfusionMatrix,
    MetricsReport,
    PatchRecord,
    compute_auc,
    compute_metrics,
    round_half_up,
)
from .labels import Correctness
from .semantic import Decision, build_correct_spec, build_error_spec, classify_semantic
from .syntactic import PredictorModel, classify_threshold, feature_vector, lr_predict


class Granularity(Enum):
    EXECUTED_METHODS = "executed"
    BUGGY_METHODS = "buggy"


class EmbedderMode(Enum):
    EXTERNAL_FILE = "file"
    HASHING_FALLBACK = "hashing"


@dataclass
class PipelineConfig:
    granularity: Granularity = Granularity.EXECUTED_METHODS
    threshold: float = 0.975
    semantic_enabled: bool = True
    syntactic_enabled: bool = True
    embedder: EmbedderMode = EmbedderMode.HASHING_FALLBACK
    embedding_path: Optional[str] = None
    solver: Optional[SolverHook] = None
    seed: int = 42

    def __post_init__(self):
        if not (self.semantic_enabled or self.syntactic_enabled):
            raise ValueError("at least one stage must be enabled")
        if not 0.0 <= self.threshold <= 1.0:
            raise ValueError("threshold must lie in [0, 1]")


@dataclass(frozen=True)
class Assessment:
    record_id: str
    verdict: Optional[Correctness]
    stage: Optional[str]
    score: Optional[float]
    label: Optional[Correctness] = None
    error: Optional[str] = None


def _load_invariant_maps(record: PatchRecord):
    """All six point maps, or None when any file is missing or unreadable."""
    paths = record.invariant_paths or {}
    maps = {}
    for slot in INVARIANT_SLOTS:
        path = paths.get(slot)
        if not path or not Path(path).is_file():
            return None
        try:
            maps[slot] = parse_invariant_file(Path(path).read_text(encoding="utf-8"))
        except (OSError, PatchCheckError):
            return None
    return maps


def _modified_method_set(record: PatchRecord) -> set[tuple[str, str]]:
    if not record.modified_methods:
        raise EmptyModifiedSet(
            f"record {record.id}: buggy-methods granularity needs modified_methods"
        )
    return {split_method_ref(ref) for ref in record.modified_methods}


def _embeddings_for(
    record: PatchRecord,
    model: PredictorModel,
    config: PipelineConfig,
    exchange: Optional[dict[str, EmbeddingVector]],
) -> tuple[EmbeddingVector, EmbeddingVector, EmbeddingVector]:
    if config.embedder is EmbedderMode.EXTERNAL_FILE:
        if exchange is None:
            if not config.embedding_path or not Path(config.embedding_path).is_file():
                raise MissingInputs("syntactic", [config.embedding_path or "<embedding file>"])
            exchange = load_embeddings(config.embedding_path)
        ids = record.embedding_ids or {
            role: f"{record.id}:{role}" for role in ("buggy", "patched", "groundtruth")
        }
        missing = [ids[r] for r in ("buggy", "patched", "groundtruth") if ids.get(r) not in exchange]
        if missing:
            raise MissingInputs("syntactic", missing)
        return tuple(exchange[ids[r]] for r in ("buggy", "patched", "groundtruth"))

    vectors = []
    missing = []
    for role in ("buggy", "patched", "groundtruth"):
        path = record.code_paths.get(role)
        if not path or not Path(path).is_file():
            missing.append(path or f"<code_paths.{role}>")
            continue
        text = Path(path).read_text(encoding="utf-8")
        vectors.append(hashing_embed(text, model.k, id=f"{record.id}:{role}"))
    if missing:
        raise MissingInputs("syntactic", missing)
    return tuple(vectors)


def _syntactic_assessment(
    record: PatchRecord,
    model: Optional[PredictorModel],
    config: PipelineConfig,
    exchange,
    stage: str,
) -> Assessment:
    if model is None:
        raise ModelRequired(f"record {record.id}: syntactic stage needs a model")
    e_b, e_p, e_g = _embeddings_for(record, model, config, exchange)
    score = lr_predict(model, feature_vector(e_b, e_p, e_g))
    verdict = classify_threshold(score, config.threshold)
    return Assessment(record.id, verdict, stage, score, record.label)


def assess_patch(
    record: PatchRecord,
    model: Optional[PredictorModel],
    config: PipelineConfig,
    exchange: Optional[dict[str, EmbeddingVector]] = None,
) -> Assessment:
    if config.semantic_enabled:
        maps = _load_invariant_maps(record)
        if maps is None:
            if config.syntactic_enabled:
                return _syntactic_assessment(record, model, config, exchange, "fallback")
            raise MissingInputs(
                "semantic",
                [
                    (record.invariant_paths or {}).get(slot) or f"<{slot}>"
                    for slot in INVARIANT_SLOTS
                ],
            )
        if config.granularity is Granularity.BUGGY_METHODS:
            methods = _modified_method_set(record)
            maps = {slot: filter_by_methods(pm, methods) for slot, pm in maps.items()}
        spec_c = build_correct_spec(
            maps["buggy_passing"], maps["groundtruth_passing"], config.solver
        )
        spec_e = build_error_spec(
            maps["buggy_failing"], maps["groundtruth_failing"], config.solver
        )
        verdict = classify_semantic(
            spec_c, spec_e, maps["patched_passing"], maps["patched_failing"], config.solver
        )
        if verdict.decision is Decision.OVERFITTING:
            return Assessment(record.id, Correctness.OVERFITTING, "semantic", None, record.label)
        if not config.syntactic_enabled:
            return Assessment(record.id, Correctness.CORRECT, "semantic", None, record.label)
        return _syntactic_assessment(record, model, config, exchange, "syntactic")
    return _syntactic_assessment(record, model, config, exchange, "syntactic")


@dataclass
class BatchReport:
    assessments: list[Assessment]
    confusion: Optional[ConfusionMatrix]
    metrics: Optional[MetricsReport]
    threshold: float
    errors: int = 0


def run_batch(
    records: list[PatchRecord],
    model: Optional[PredictorModel],
    config: PipelineConfig,
) -> BatchReport:
    """Assess every record, aggregate labeled outcomes, never abort the batch."""
    if not records:
        raise EmptyManifest("the manifest holds no patch records")
    exchange = None
    if config.syntactic_enabled and config.embedder is EmbedderMode.EXTERNAL_FILE:
        if not config.embedding_path:
            raise MissingInputs("syntactic", ["<embedding file>"])
        exchange = load_embeddings(config.embedding_path)

    assessments: list[Assessment] = []
    for record in sorted(records, key=lambda r: r.id):
        try:
            assessments.append(assess_patch(record, model, config, exchange))
        except PatchCheckError as exc:
            assessments.append(
                Assessment(record.id, None, None, None, record.label, error=str(exc))
            )

    counts = {"tp": 0, "fn": 0, "fp": 0, "tn": 0}
    scored: list[tuple[float, Correctness]] = []
    labeled = 0
    for outcome in assessments:
        if outcome.error is not None or outcome.label is None:
            continue
        labeled += 1
        positive = outcome.verdict is Correctness.OVERFITTING
        truly_positive = outcome.label is Correctness.OVERFITTING
        if positive and truly_positive:
            counts["tp"] += 1
        elif positive:
            counts["fp"] += 1
        elif truly_positive:
            counts["fn"] += 1
        else:
            counts["tn"] += 1
        if outcome.score is not None:
            scored.append((outcome.score, outcome.label))

    confusion = metrics = None
    if labeled:
        confusion = ConfusionMatrix(**counts)
        metrics = compute_metrics(confusion)
        if {lab for _, lab in scored} == {Correctness.CORRECT, Correctness.OVERFITTING}:
            metrics = replace(metrics, auc=compute_auc(scored))
    errors = sum(1 for a in assessments if a.error is not None)
    return BatchReport(assessments, confusion, metrics, config.threshold, errors)


def report_to_dict(report: BatchReport) -> dict:
    """Machine-readable form; scores are rounded to 9 decimals so output is
    byte-stable across arithmetic orderings."""
    payload: dict = {}
    if report.confusion is not None:
        payload["confusion"] = {
            "tp": report.confusion.tp,
            "fn": report.confusion.fn,
            "fp": report.confusion.fp,
            "tn": report.confusion.tn,
        }
    if report.metrics is not None:
        metrics = {
            name: getattr(report.metrics, name)
            for name in ("recall", "precision", "accuracy", "f1", "auc")
            if getattr(report.metrics, name) is not None
        }
        metrics["rounded"] = {
            name: round_half_up(value)
            for name, value in metrics.items()
            if name != "auc"
        }
        payload["metrics"] = metrics
    payload["threshold"] = report.threshold
    per_patch = []
    for outcome in report.assessments:
        entry: dict = {"id": outcome.record_id}
        if outcome.error is not None:
            entry["error"] = outcome.error
        else:
            entry["stage"] = outcome.stage
            if outcome.score is not None:
                entry["score"] = round(outcome.score, 9)
            entry["verdict"] = outcome.verdict.value
        if outcome.label is not None:
            entry["label"] = outcome.label.value
        per_patch.append(entry)
    payload["per_patch"] = per_patch
    if report.errors:
        payload["errors"] = report.errors
    return payload


def report_to_json(report: BatchReport) -> str:
    return json.dumps(report_to_dict(report), indent=2) + "\n"


def render_table(report: BatchReport) -> str:
    """Aligned human-readable summary."""
    rows = [("id", "stage", "score", "verdict", "label")]
    for outcome in report.assessments:
        if outcome.error is not None:
            rows.append((outcome.record_id, "error", "-", outcome.error[:40], "-"))
            continue
        rows.append(
            (
                outcome.record_id,
                outcome.stage or "-",
                f"{outcome.score:.6f}" if outcome.score is not None else "-",
                outcome.verdict.value,
                outcome.label.value if outcome.label else "-",
            )
        )
    widths = [max(len(row[i]) for row in rows) for i in range(5)]
    lines = ["  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip() for row in rows]
    if report.metrics is not None:
        lines.append("")
        parts = []
        for name in ("recall", "precision", "accuracy", "f1", "auc"):
            value = getattr(report.metrics, name)
            if value is not None:
                parts.append(f"{name}={round_half_up(value):.2f}")
        c = report.confusion
        lines.append(f"confusion tp={c.tp} fn={c.fn} fp={c.fp} tn={c.tn}  " + " ".join(parts))
    if report.errors:
        lines.append(f"{report.errors} record(s) failed; see the JSON report")
    return "\n".join(lines) + "\n"


def threshold_sweep(report: BatchReport) -> list[dict]:
    """Re-threshold the syntactic scores; semantic verdicts are fixed.

    Returns rows of (threshold, recall, precision, accuracy, f1) over the
    labeled, non-error records.
    """
    labeled = [a for a in report.assessments if a.error is None and a.label is not None]
    thresholds = sorted({a.score for a in labeled if a.score is not None} | {0.0, 1.0})
    rows = []
    for threshold in thresholds:
        counts = {"tp": 0, "fn": 0, "fp": 0, "tn": 0}
        for outcome in labeled:
            if outcome.score is None:
                positive = outcome.verdict is Correctness.OVERFITTING
            else:
                positive = outcome.score > threshold
            truly = outcome.label is Correctness.OVERFITTING
            key = ("tp" if truly else "fp") if positive else ("fn" if truly else "tn")
            counts[key] += 1
        metrics = compute_metrics(ConfusionMatrix(**counts))
        rows.append(
            {
                "threshold": threshold,
                "recall": metrics.recall,
                "precision": metrics.precision,
                "accuracy": metrics.accuracy,
                "f1": metrics.f1,
            }
        )
    return rows
