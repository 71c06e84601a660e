"""Inference over a saved model artifact."""

import json
from pathlib import Path

import torch
from transformers import AutoModelForSequenceClassification, AutoTokenizer

from .records import DistillRecord, SlmPrediction
from .sequence import build_input_sequence

INDEX_TO_LABEL = ("REAL", "FAKE")


class ModelError(RuntimeError):
    """The artifact directory cannot be loaded."""


class LoadedModel:
    def __init__(self, model, tokenizer, max_length: int, encoder: str):
        self.model = model
        self.tokenizer = tokenizer
        self.max_length = max_length
        self.encoder = encoder


def load_model(artifact_dir: str | Path) -> LoadedModel:
    artifact_dir = Path(artifact_dir)
    try:
        train_config = json.loads((artifact_dir / "train_config.json").read_text(encoding="utf-8"))
        tokenizer = AutoTokenizer.from_pretrained(artifact_dir)
        model = AutoModelForSequenceClassification.from_pretrained(artifact_dir)
    except (OSError, ValueError, KeyError) as exc:
        raise ModelError(f"cannot load model from {artifact_dir}: {exc}") from exc
    model.eval()
    return LoadedModel(
        model=model,
        tokenizer=tokenizer,
        max_length=train_config["train"]["max_length"],
        encoder=train_config["train"]["encoder"],
    )


def predict(records: list[DistillRecord], loaded: LoadedModel, batch_size: int = 32) -> list[SlmPrediction]:
    """One prediction per record, in input order, with normalized log-probs."""
    predictions = []
    for start in range(0, len(records), batch_size):
        chunk = records[start : start + batch_size]
        texts = [
            build_input_sequence(r, loaded.tokenizer.sep_token, loaded.tokenizer, loaded.max_length)
            for r in chunk
        ]
        batch = loaded.tokenizer(
            texts, padding=True, truncation=True, max_length=loaded.max_length,
            return_tensors="pt",
        )
        with torch.no_grad():
            logits = loaded.model(**batch).logits
            log_probs = torch.log_softmax(logits, dim=1)
        for record, row in zip(chunk, log_probs):
            label = INDEX_TO_LABEL[int(row.argmax().item())]
            predictions.append(
                SlmPrediction(
                    id=record.id,
                    label=label,
                    logprob_real=row[0].item(),
                    logprob_fake=row[1].item(),
                )
            )
    return predictions
