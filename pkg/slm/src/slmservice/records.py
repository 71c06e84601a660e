"""Interchange schemas: pipeline export records in, predictions out."""

import json
from pathlib import Path
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field

LABELS = ("REAL", "FAKE")


class DistillRecord(BaseModel):
    """One training/inference record, exactly the pipeline's export schema.

    `pseudo_label` is required for training, optional for inference.
    """

    model_config = ConfigDict(extra="forbid")

    id: str
    headline: str = Field(min_length=1)
    body_preprocessed: str = ""
    image_summary: str = ""
    justification: str = ""
    pseudo_label: Literal["REAL", "FAKE"] | None = None


class SlmPrediction(BaseModel):
    """Binary verdict with normalized log-probabilities."""

    id: str
    label: Literal["REAL", "FAKE"]
    logprob_real: float
    logprob_fake: float


def read_records(path: str | Path) -> list[DistillRecord]:
    """Read a record-per-line export file."""
    records = []
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip():
            continue
        try:
            records.append(DistillRecord.model_validate(json.loads(line)))
        except (json.JSONDecodeError, ValueError) as exc:
            raise ValueError(f"{path}: line {lineno}: {exc}") from exc
    return records


def write_predictions(predictions: list[SlmPrediction], path: str | Path,
                      true_labels: dict[str, str] | None = None) -> None:
    """Write predictions as record-per-line JSON, compatible with the
    pipeline's evaluation reader ({id, pred, logprob_true_label})."""
    with Path(path).open("w", encoding="utf-8") as handle:
        for pred in predictions:
            row = {
                "id": pred.id,
                "pred": pred.label,
                "logprob_real": pred.logprob_real,
                "logprob_fake": pred.logprob_fake,
            }
            true_label = (true_labels or {}).get(pred.id)
            if true_label in LABELS:
                row["logprob_true_label"] = (
                    pred.logprob_real if true_label == "REAL" else pred.logprob_fake
                )
            handle.write(json.dumps(row, ensure_ascii=False) + "\n")
