"""Small text helpers used throughout the pipeline."""

import json
import re

from .errors import MalformedResponse

_TOKEN_RE = re.compile(r"[a-z0-9]+")
_SENTENCE_SPLIT_RE = re.compile(r"(?<=[.!?])\s+")
_QUESTION_NORM_RE = re.compile(r"[^a-z0-9\s]")


def tokenize(text: str) -> list[str]:
    """Lowercase tokens split on non-alphanumeric runs."""
    return _TOKEN_RE.findall(text.lower())


def split_sentences(text: str) -> list[str]:
    """Naive sentence split on terminal punctuation followed by whitespace."""
    parts = [p.strip() for p in _SENTENCE_SPLIT_RE.split(text.strip())]
    return [p for p in parts if p]


def truncate_sentences(text: str, limit: int) -> str:
    """Keep at most `limit` sentences, joined by single spaces."""
    sentences = split_sentences(text)
    if len(sentences) <= limit:
        return " ".join(sentences)
    return " ".join(sentences[:limit])


def normalize_question(text: str) -> str:
    """Canonical form used for duplicate-question detection."""
    lowered = _QUESTION_NORM_RE.sub("", text.lower())
    return " ".join(lowered.split())


def parse_json_object(text: str) -> dict:
    """Parse a JSON object out of model output, tolerating code fences.

    Raises MalformedResponse when no object can be recovered.
    """
    stripped = text.strip()
    if stripped.startswith("```"):
        stripped = re.sub(r"^```[a-zA-Z]*\n?", "", stripped)
        stripped = re.sub(r"\n?```$", "", stripped.strip())
    for candidate in (stripped, _outer_slice(stripped, "{", "}")):
        if candidate is None:
            continue
        try:
            value = json.loads(candidate)
        except json.JSONDecodeError:
            continue
        if isinstance(value, dict):
            return value
    raise MalformedResponse(f"expected a JSON object, got: {text[:120]!r}")


def parse_json_array(text: str) -> list:
    """Parse a JSON array out of model output, tolerating code fences."""
    stripped = text.strip()
    if stripped.startswith("```"):
        stripped = re.sub(r"^```[a-zA-Z]*\n?", "", stripped)
        stripped = re.sub(r"\n?```$", "", stripped.strip())
    for candidate in (stripped, _outer_slice(stripped, "[", "]")):
        if candidate is None:
            continue
        try:
            value = json.loads(candidate)
        except json.JSONDecodeError:
            continue
        if isinstance(value, list):
            return value
    raise MalformedResponse(f"expected a JSON array, got: {text[:120]!r}")


def _outer_slice(text: str, open_ch: str, close_ch: str) -> str | None:
    start = text.find(open_ch)
    end = text.rfind(close_ch)
    if start == -1 or end == -1 or end <= start:
        return None
    return text[start : end + 1]
