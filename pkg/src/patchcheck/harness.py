"""Dataset handling and the metric suite.

Overfitting is the positive class throughout: TP means both the classifier
and the ground truth call a patch overfitting.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Decimal
from pathlib import Path
from typing import Optional

from .errors import (
    ManifestError,
    MissingCodeFile,
    NoCorrectPatches,
    SingleClassData,
    TooFewRecords,
)
from .labels import Correctness

INVARIANT_SLOTS = (
    "buggy_passing",
    "buggy_failing",
    "groundtruth_passing",
    "groundtruth_failing",
    "patched_passing",
    "patched_failing",
)


@dataclass
class PatchRecord:
    """One assessment unit; file paths are resolved against the manifest dir."""

    id: str
    project: str = ""
    bug_id: str = ""
    tool: str = ""
    label: Optional[Correctness] = None
    code_paths: dict[str, str] = field(default_factory=dict)
    invariant_paths: Optional[dict[str, str]] = None
    embedding_ids: Optional[dict[str, str]] = None
    coverage_path: Optional[str] = None
    modified_methods: Optional[list[str]] = None


def load_manifest(path: str | Path) -> list[PatchRecord]:
    base = Path(path).parent
    try:
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, ValueError) as exc:
        raise ManifestError(f"cannot read manifest {path}: {exc}") from exc
    if not isinstance(payload, list):
        raise ManifestError("manifest must be a JSON array of patch records")

    def resolve(p: Optional[str]) -> Optional[str]:
        return str(base / p) if p else None

    records = []
    seen = set()
    for entry in payload:
        try:
            record = PatchRecord(
                id=entry["id"],
                project=entry.get("project", ""),
                bug_id=entry.get("bug_id", ""),
                tool=entry.get("tool", ""),
                label=Correctness.parse(entry["label"]) if entry.get("label") else None,
                code_paths={k: resolve(v) for k, v in entry.get("code_paths", {}).items()},
                invariant_paths=(
                    {k: resolve(v) for k, v in entry["invariant_paths"].items()}
                    if entry.get("invariant_paths")
                    else None
                ),
                embedding_ids=entry.get("embedding_ids"),
                coverage_path=resolve(entry.get("coverage_path")),
                modified_methods=entry.get("modified_methods"),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ManifestError(f"bad manifest entry: {exc}") from exc
        if record.id in seen:
            raise ManifestError(f"duplicate record id {record.id!r}")
        seen.add(record.id)
        records.append(record)
    return records


@dataclass(frozen=True)
class ConfusionMatrix:
    tp: int
    fn: int
    fp: int
    tn: int

    @property
    def total(self) -> int:
        return self.tp + self.fn + self.fp + self.tn


@dataclass(frozen=True)
class MetricsReport:
    confusion: ConfusionMatrix
    recall: Optional[float]
    precision: Optional[float]
    accuracy: Optional[float]
    f1: Optional[float]
    auc: Optional[float] = None
    undefined: tuple[str, ...] = ()


def round_half_up(value: float, places: int = 2) -> float:
    quantum = Decimal(1).scaleb(-places)
    return float(Decimal(repr(value)).quantize(quantum, rounding=ROUND_HALF_UP))


def compute_metrics(confusion: ConfusionMatrix) -> MetricsReport:
    """Recall/precision/accuracy/F1 from counts; zero-denominator metrics are
    reported as absent, never as 0."""
    undefined: list[str] = []

    def ratio(name: str, num: int, den: int) -> Optional[float]:
        if den == 0:
            undefined.append(name)
            return None
        return num / den

    recall = ratio("recall", confusion.tp, confusion.tp + confusion.fn)
    precision = ratio("precision", confusion.tp, confusion.tp + confusion.fp)
    accuracy = ratio("accuracy", confusion.tp + confusion.tn, confusion.total)
    if recall is None or precision is None or (recall + precision) == 0:
        undefined.append("f1")
        f1 = None
    else:
        f1 = 2 * recall * precision / (recall + precision)
    return MetricsReport(confusion, recall, precision, accuracy, f1, None, tuple(undefined))


def compute_auc(scores: list[tuple[float, Correctness]]) -> float:
    """Mann-Whitney AUC with ascending ranks and average ranks for ties."""
    positives = [s for s, lab in scores if lab == Correctness.OVERFITTING]
    negatives = [s for s, lab in scores if lab == Correctness.CORRECT]
    if not positives or not negatives:
        raise SingleClassData("AUC needs both classes")

    indexed = sorted(range(len(scores)), key=lambda i: scores[i][0])
    ranks = [0.0] * len(scores)
    i = 0
    while i < len(indexed):
        j = i
        while j + 1 < len(indexed) and scores[indexed[j + 1]][0] == scores[indexed[i]][0]:
            j += 1
        average = (i + j) / 2 + 1  # ranks are 1-based
        for idx in indexed[i : j + 1]:
            ranks[idx] = average
        i = j + 1

    n0 = len(positives)
    n1 = len(negatives)
    s0 = sum(ranks[i] for i, (_, lab) in enumerate(scores) if lab == Correctness.OVERFITTING)
    return (s0 - n0 * (n0 + 1) / 2) / (n0 * n1)


def normalize_code_tokens(text: str) -> tuple[str, ...]:
    """Token sequence with comments stripped and whitespace collapsed.

    Understands // and /* */ comments and leaves string/char literals intact.
    """
    out: list[str] = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch in "\"'":
            quote = ch
            j = i + 1
            while j < n:
                if text[j] == "\\":
                    j += 2
                    continue
                if text[j] == quote:
                    j += 1
                    break
                j += 1
            out.append(text[i:j])
            i = j
        elif ch == "/" and i + 1 < n and text[i + 1] == "/":
            while i < n and text[i] != "\n":
                i += 1
        elif ch == "/" and i + 1 < n and text[i + 1] == "*":
            end = text.find("*/", i + 2)
            i = n if end == -1 else end + 2
        elif ch.isspace():
            i += 1
        elif ch.isalnum() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            out.append(text[i:j])
            i = j
        else:
            out.append(ch)
            i += 1
    return tuple(out)


def _patched_tokens(record: PatchRecord) -> tuple[str, ...]:
    path = record.code_paths.get("patched")
    if not path or not Path(path).is_file():
        raise MissingCodeFile(record.id, str(path))
    return normalize_code_tokens(Path(path).read_text(encoding="utf-8"))


def dedup_against_eval(
    train: list[PatchRecord], eval_records: list[PatchRecord]
) -> tuple[list[PatchRecord], list[str]]:
    """Drop training records whose patched code matches an evaluation record's
    normalized token sequence; returns (kept, removed ids)."""
    eval_tokens = {_patched_tokens(record) for record in eval_records}
    kept: list[PatchRecord] = []
    removed: list[str] = []
    for record in train:
        if _patched_tokens(record) in eval_tokens:
            removed.append(record.id)
        else:
            kept.append(record)
    return kept, removed


def split_train_valid(
    records: list[PatchRecord], fraction: float, seed: int
) -> tuple[list[PatchRecord], list[PatchRecord]]:
    if not 0.0 < fraction < 1.0:
        raise ValueError("fraction must lie strictly between 0 and 1")
    cut = int(len(records) * fraction)
    if cut == 0 or cut == len(records):
        raise TooFewRecords(f"{len(records)} records cannot split at {fraction}")
    shuffled = list(records)
    random.Random(seed).shuffle(shuffled)
    return shuffled[:cut], shuffled[cut:]


def tune_threshold(validation_scores: list[tuple[float, Correctness]]) -> float:
    """Smallest threshold that misclassifies no correct validation patch:
    the maximum score over correct-labeled patches."""
    correct_scores = [s for s, lab in validation_scores if lab == Correctness.CORRECT]
    if not correct_scores:
        raise NoCorrectPatches("threshold tuning needs a correct-labeled score")
    return max(correct_scores)
