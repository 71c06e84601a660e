"""Raw article -> (cleaned body, claim, image summary)."""

import json
import logging
import re

from .config import PipelineConfig
from .errors import MalformedResponse
from .models import Claim, ImageSummary
from .providers.base import LlmRequest, ProviderSet
from .textutil import parse_json_object, truncate_sentences

logger = logging.getLogger(__name__)

_WHITESPACE_RE = re.compile(r"\s+")
_CONTROL_RE = re.compile(r"[\x00-\x08\x0e-\x1f\x7f]")
_PUNCT_RUN_RE = re.compile(r"([.!?])[.!?]{2,}")

MAX_CLAIM_SENTENCES = 3

CLAIM_PROMPT = """Distill the news article below into a single concise claim of at most three \
sentences, keeping the salient named entities (people, organizations, places, dates, events).

Headline: {headline}
Body: {body}

Respond with strict JSON: {{"claim": "...", "entities": ["...", "..."]}}"""

IMAGE_SUMMARY_PROMPT = """Write one coherent paragraph describing the news image whose detected \
entities are listed below, weaving every entity into the description.

Detected entities: {entities}
Image reference: {image}

Respond with the paragraph only."""


def clean_text(body: str) -> str:
    """Normalize whitespace and strip noise from an article body.

    Whitespace runs collapse to single spaces, non-whitespace control
    characters are removed, and runs of three or more terminal punctuation
    marks collapse to their first character. Idempotent; never lengthens.
    """
    text = _WHITESPACE_RE.sub(" ", body)
    text = _CONTROL_RE.sub("", text)
    text = _PUNCT_RUN_RE.sub(r"\1", text)
    text = _WHITESPACE_RE.sub(" ", text)
    return text.strip()


def generate_claim(headline: str, body: str, config: PipelineConfig, providers: ProviderSet) -> Claim:
    """Distill the article into a claim; degrades to the headline on failure."""
    if not headline.strip():
        raise ValueError("headline must be non-empty")

    prompt = CLAIM_PROMPT.format(headline=headline, body=body)
    request = LlmRequest(
        stage="claim",
        prompt=prompt,
        temperature=config.temperature("claim"),
        response_contract="structured_record",
    )
    for attempt in range(2):
        response = providers.llm_complete(request)
        try:
            record = parse_json_object(response)
            text = str(record["claim"]).strip()
            entities = [str(e).strip() for e in record.get("entities", [])]
            if not text:
                raise MalformedResponse("empty claim text")
        except (MalformedResponse, KeyError, TypeError) as exc:
            logger.warning("claim generation attempt %d unparseable: %s", attempt + 1, exc)
            request = LlmRequest(
                stage="claim",
                prompt=prompt + "\n\nYour previous reply was not valid JSON. Reply with JSON only.",
                temperature=config.temperature("claim"),
                response_contract="structured_record",
            )
            continue
        text = truncate_sentences(text, MAX_CLAIM_SENTENCES)
        haystack = f"{text} {headline}".lower()
        kept = tuple(e for e in entities if e and e.lower() in haystack)
        return Claim(text=text, entities=kept)

    logger.warning("claim generation fell back to headline")
    return Claim(text=headline.strip(), entities=())


def summarize_image(
    image: str,
    entities: list[str],
    config: PipelineConfig,
    providers: ProviderSet,
) -> ImageSummary:
    """One-paragraph description of the article image embedding the entity labels."""
    prompt = IMAGE_SUMMARY_PROMPT.format(
        entities=json.dumps(list(entities)), image=image
    )
    # No dedicated stage exists for image summarization; it shares the claim
    # stage and its temperature.
    request = LlmRequest(
        stage="claim",
        prompt=prompt,
        temperature=config.temperature("claim"),
    )
    text = providers.llm_complete(request).strip()
    return ImageSummary(text=text, entities=tuple(entities))
