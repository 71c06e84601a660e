"""Cross-entropy fine-tuning on pipeline-exported records."""

import json
import logging
import random
from dataclasses import asdict, dataclass
from pathlib import Path

import torch
from torch.utils.data import DataLoader, TensorDataset

from .encoder import DEFAULT_ENCODER, build_model, build_tokenizer
from .records import LABELS, DistillRecord
from .sequence import build_input_sequence

logger = logging.getLogger(__name__)

LABEL_TO_INDEX = {"REAL": 0, "FAKE": 1}


class DataError(ValueError):
    """Training data cannot support a binary classifier."""


@dataclass(frozen=True)
class TrainConfig:
    encoder: str = DEFAULT_ENCODER
    learning_rate: float = 2e-5
    batch_size: int = 16
    epochs: int = 3
    seed: int = 13
    max_length: int = 256


@dataclass(frozen=True)
class TrainResult:
    train_accuracy: float
    final_loss: float
    n_records: int
    epochs: int


def _seed_everything(seed: int) -> None:
    random.seed(seed)
    torch.manual_seed(seed)


def _encode(records, tokenizer, max_length):
    texts = [
        build_input_sequence(r, tokenizer.sep_token, tokenizer, max_length) for r in records
    ]
    batch = tokenizer(
        texts, padding=True, truncation=True, max_length=max_length, return_tensors="pt"
    )
    return batch["input_ids"], batch["attention_mask"]


def train(records: list[DistillRecord], config: TrainConfig, output_dir: str | Path) -> TrainResult:
    """Fine-tune the binary classifier and save the artifact directory.

    Deterministic given the seed: same records + config reproduce the same
    metrics exactly.
    """
    labeled = [r for r in records if r.pseudo_label is not None]
    if len(labeled) < 2 or len({r.pseudo_label for r in labeled}) < 2:
        raise DataError("training requires at least two records covering both labels")

    _seed_everything(config.seed)
    torch.use_deterministic_algorithms(True)

    corpus = [
        " ".join((r.headline, r.body_preprocessed, r.image_summary, r.justification))
        for r in labeled
    ]
    tokenizer = build_tokenizer(config.encoder, corpus)
    model = build_model(config.encoder, tokenizer, config.max_length)
    model.train()

    input_ids, attention_mask = _encode(labeled, tokenizer, config.max_length)
    labels = torch.tensor([LABEL_TO_INDEX[r.pseudo_label] for r in labeled])
    dataset = TensorDataset(input_ids, attention_mask, labels)
    generator = torch.Generator().manual_seed(config.seed)
    loader = DataLoader(dataset, batch_size=config.batch_size, shuffle=True, generator=generator)

    optimizer = torch.optim.AdamW(model.parameters(), lr=config.learning_rate)
    final_loss = 0.0
    for epoch in range(config.epochs):
        epoch_loss = 0.0
        for ids, mask, y in loader:
            optimizer.zero_grad()
            out = model(input_ids=ids, attention_mask=mask, labels=y)
            out.loss.backward()
            optimizer.step()
            epoch_loss += out.loss.item() * len(y)
        final_loss = epoch_loss / len(dataset)
        logger.info("epoch %d/%d loss %.4f", epoch + 1, config.epochs, final_loss)

    model.eval()
    with torch.no_grad():
        logits = model(input_ids=input_ids, attention_mask=attention_mask).logits
        accuracy = (logits.argmax(dim=1) == labels).float().mean().item()

    output_dir = Path(output_dir)
    output_dir.mkdir(parents=True, exist_ok=True)
    model.save_pretrained(output_dir)
    tokenizer.save_pretrained(output_dir)
    (output_dir / "train_config.json").write_text(
        json.dumps({"train": asdict(config), "labels": list(LABELS)}, indent=2) + "\n",
        encoding="utf-8",
    )
    result = TrainResult(
        train_accuracy=accuracy,
        final_loss=final_loss,
        n_records=len(labeled),
        epochs=config.epochs,
    )
    (output_dir / "metrics.json").write_text(
        json.dumps(asdict(result), indent=2) + "\n", encoding="utf-8"
    )
    return result
