"""Dataset ingestion, splitting, classification metrics, and the
rationale-quality metrics (utility deltas, simulatability, log-likelihood gain)."""

import csv
import json
import random
from dataclasses import dataclass
from pathlib import Path

from .errors import SchemaError
from .models import Label

DATASET_FORMATS = ("delimited", "record-per-line")


@dataclass(frozen=True)
class DatasetRecord:
    id: str
    headline: str
    body: str
    label: Label
    image_path: str | None = None


@dataclass(frozen=True)
class MetricsReport:
    acc: float
    f1: float
    precision: float
    recall: float
    n: int


@dataclass(frozen=True)
class RationaleMetrics:
    utility: dict
    las: float
    rev: float

    def __post_init__(self):
        if not -1.0 <= self.las <= 1.0:
            raise ValueError("las must lie in [-1, 1]")


def _record_from_mapping(raw: dict, lineno: int, origin: str) -> DatasetRecord:
    missing = [k for k in ("id", "headline", "body", "label") if not str(raw.get(k) or "").strip()]
    if missing:
        raise SchemaError(f"{origin}: line {lineno}: missing field(s) {missing}")
    try:
        label = Label(str(raw["label"]).strip().upper())
    except ValueError as exc:
        raise SchemaError(f"{origin}: line {lineno}: bad label {raw['label']!r}") from exc
    image_path = str(raw.get("image_path") or "").strip() or None
    return DatasetRecord(
        id=str(raw["id"]).strip(),
        headline=str(raw["headline"]),
        body=str(raw["body"]),
        label=label,
        image_path=image_path,
    )


def load_dataset(path: str | Path, fmt: str = "delimited") -> list[DatasetRecord]:
    """Read a labeled benchmark export; malformed rows fail with line numbers."""
    if fmt not in DATASET_FORMATS:
        raise ValueError(f"format must be one of {DATASET_FORMATS}")
    path = Path(path)
    records = []
    if fmt == "delimited":
        delimiter = "\t" if path.suffix.lower() == ".tsv" else ","
        with path.open(newline="", encoding="utf-8") as handle:
            reader = csv.DictReader(handle, delimiter=delimiter)
            for lineno, row in enumerate(reader, start=2):
                records.append(_record_from_mapping(row, lineno, str(path)))
    else:
        for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
            if not line.strip():
                continue
            try:
                raw = json.loads(line)
            except json.JSONDecodeError as exc:
                raise SchemaError(f"{path}: line {lineno}: invalid JSON") from exc
            records.append(_record_from_mapping(raw, lineno, str(path)))
    return records


def split(
    records: list, ratios: tuple[float, float, float] = (7, 2, 1), seed: int = 13
) -> tuple[list, list, list]:
    """Deterministic seeded shuffle into train/val/test by floor arithmetic."""
    if any(r <= 0 for r in ratios):
        raise ValueError("ratios must be positive")
    shuffled = list(records)
    random.Random(seed).shuffle(shuffled)
    total = sum(ratios)
    n = len(shuffled)
    n_train = int(n * ratios[0] / total)
    n_val = int(n * ratios[1] / total)
    train = shuffled[:n_train]
    val = shuffled[n_train : n_train + n_val]
    test = shuffled[n_train + n_val :]
    return train, val, test


def compute_classification_metrics(
    preds: list[Label],
    labels: list[Label],
    positive_class: Label = Label.FAKE,
    average: str = "binary",
) -> MetricsReport:
    """Accuracy/precision/recall/F1 with FAKE as the positive class by default.

    Degenerate denominators read as 0 (so F1 = 0 when precision + recall = 0).
    """
    if len(preds) != len(labels) or not preds:
        raise ValueError("preds and labels must be equal-length and non-empty")
    for p in preds:
        if not isinstance(p, Label):
            raise ValueError(f"predictions must be binary REAL/FAKE, got {p!r}")

    if average == "macro":
        reports = [
            _binary_metrics(preds, labels, positive)
            for positive in (Label.FAKE, Label.REAL)
        ]
        return MetricsReport(
            acc=reports[0].acc,
            f1=sum(r.f1 for r in reports) / 2,
            precision=sum(r.precision for r in reports) / 2,
            recall=sum(r.recall for r in reports) / 2,
            n=len(preds),
        )
    if average != "binary":
        raise ValueError("average must be 'binary' or 'macro'")
    return _binary_metrics(preds, labels, positive_class)


def _binary_metrics(preds, labels, positive) -> MetricsReport:
    tp = sum(1 for p, y in zip(preds, labels) if p == positive and y == positive)
    fp = sum(1 for p, y in zip(preds, labels) if p == positive and y != positive)
    fn = sum(1 for p, y in zip(preds, labels) if p != positive and y == positive)
    correct = sum(1 for p, y in zip(preds, labels) if p == y)
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return MetricsReport(
        acc=correct / len(preds), f1=f1, precision=precision, recall=recall, n=len(preds)
    )


def compute_utility(with_report: MetricsReport, without_report: MetricsReport) -> dict:
    """Per-metric percentage-point gain from training with justifications."""
    if with_report.n != without_report.n:
        raise ValueError("utility requires reports over the same test set")
    return {
        "acc": (with_report.acc - without_report.acc) * 100,
        "f1": (with_report.f1 - without_report.f1) * 100,
        "precision": (with_report.precision - without_report.precision) * 100,
        "recall": (with_report.recall - without_report.recall) * 100,
    }


def compute_las(correct_with: list[int], correct_without: list[int]) -> float:
    """Mean per-sample correctness gain from seeing the justification."""
    if len(correct_with) != len(correct_without) or not correct_with:
        raise ValueError("inputs must be equal-length and non-empty")
    for v in list(correct_with) + list(correct_without):
        if v not in (0, 1):
            raise ValueError("correctness indicators must be 0 or 1")
    return sum(w - wo for w, wo in zip(correct_with, correct_without)) / len(correct_with)


def compute_rev(loglik_with: list[float], loglik_without: list[float]) -> float:
    """Mean true-label log-likelihood gain from conditioning on the justification."""
    if len(loglik_with) != len(loglik_without) or not loglik_with:
        raise ValueError("inputs must be equal-length and non-empty")
    return sum(w - wo for w, wo in zip(loglik_with, loglik_without)) / len(loglik_with)
