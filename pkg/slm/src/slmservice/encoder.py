"""Encoder construction: a pretrained checkpoint or a from-scratch mini model.

The default encoder identifier is the compact pretrained checkpoint
"distilroberta-base". Environments without hub access can train the
"local-mini" encoder: a small transformer initialized from scratch with a
word-level tokenizer fitted on the training corpus.
"""

from transformers import (
    AutoModelForSequenceClassification,
    AutoTokenizer,
    PreTrainedTokenizerFast,
    RobertaConfig,
    RobertaForSequenceClassification,
)

DEFAULT_ENCODER = "distilroberta-base"
LOCAL_MINI = "local-mini"

_MINI = dict(hidden_size=64, num_hidden_layers=2, num_attention_heads=2, intermediate_size=128)


def build_local_tokenizer(corpus: list[str]) -> PreTrainedTokenizerFast:
    """Word-level tokenizer fitted on the corpus (offline, deterministic)."""
    from tokenizers import Tokenizer, models, pre_tokenizers, trainers

    tokenizer = Tokenizer(models.WordLevel(unk_token="<unk>"))
    tokenizer.pre_tokenizer = pre_tokenizers.Whitespace()
    trainer = trainers.WordLevelTrainer(special_tokens=["<pad>", "<unk>", "<cls>", "<sep>"])
    tokenizer.train_from_iterator(sorted(corpus), trainer)
    return PreTrainedTokenizerFast(
        tokenizer_object=tokenizer,
        pad_token="<pad>",
        unk_token="<unk>",
        cls_token="<cls>",
        sep_token="<sep>",
    )


def build_tokenizer(encoder: str, corpus: list[str] | None = None):
    if encoder == LOCAL_MINI:
        if not corpus:
            raise ValueError("local-mini tokenizer requires a training corpus")
        return build_local_tokenizer(corpus)
    return AutoTokenizer.from_pretrained(encoder)


def build_model(encoder: str, tokenizer, max_length: int):
    if encoder == LOCAL_MINI:
        config = RobertaConfig(
            vocab_size=tokenizer.vocab_size + 8,
            max_position_embeddings=max_length + 8,
            num_labels=2,
            pad_token_id=tokenizer.pad_token_id,
            bos_token_id=tokenizer.cls_token_id,
            eos_token_id=tokenizer.sep_token_id,
            **_MINI,
        )
        return RobertaForSequenceClassification(config)
    return AutoModelForSequenceClassification.from_pretrained(encoder, num_labels=2)
