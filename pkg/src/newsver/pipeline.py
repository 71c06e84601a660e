"""End-to-end orchestration for one news item.

Variant control flow (mirrors the ablation roster):
  full          preprocess -> retrieval -> persona rounds -> decide (gated persuasion)
  evidence-only preprocess -> retrieval -> decide, no persona rounds, no persuasion
  agentic-only  preprocess -> persona rounds over an empty bundle -> decide, no persuasion
  pkm-only      preprocess -> persuasion always -> decide over minimal memory
"""

import logging
from dataclasses import replace

from .config import PipelineConfig
from .errors import UnresolvableImage
from .evidence import (
    assemble_bundle,
    retrieve_kg_triplets,
    select_textual_evidence,
    select_visual_evidence,
)
from .personas import init_memory, run_rounds
from .models import NewsItem, ObservationBundle, VerdictRecord
from .persuasion import PersuasionTaxonomy, load_taxonomy
from .preprocess import clean_text, generate_claim, summarize_image
from .providers.base import ProviderSet
from .verdict import decide

logger = logging.getLogger(__name__)


def build_observation(
    news: NewsItem, config: PipelineConfig, providers: ProviderSet
) -> ObservationBundle:
    """Preprocessing plus evidence retrieval (as the variant allows)."""
    body = clean_text(news.body)
    claim = generate_claim(news.headline, body, config, providers)

    image_enabled = (
        news.image is not None and not config.disable_image and config.variant != "pkm-only"
    )
    image_summary = None
    if image_enabled:
        try:
            entities = providers.extract_image_entities(news.image)
            image_summary = summarize_image(news.image, entities, config, providers)
        except UnresolvableImage as exc:
            logger.warning("image summary skipped for %s: %s", news.id, exc)
            image_summary = None

    retrieval_enabled = config.variant in ("full", "evidence-only")
    texts, visuals, triplets = [], [], []
    if retrieval_enabled:
        texts = select_textual_evidence(claim, config, providers)
        if image_enabled and image_summary is not None:
            visuals = select_visual_evidence(news.image, claim, config, providers)
        if not config.disable_kg and claim.entities:
            triplets = retrieve_kg_triplets(claim, config, providers)

    return ObservationBundle(
        headline=news.headline,
        preprocessed_body=body,
        claim=claim,
        evidence=assemble_bundle(texts, visuals, triplets),
        image_summary=image_summary,
    )


def verify_item(
    news: NewsItem,
    config: PipelineConfig,
    providers: ProviderSet,
    taxonomy: PersuasionTaxonomy | None = None,
    fewshots: list[dict] | None = None,
) -> VerdictRecord:
    """Run the configured pipeline variant on one item."""
    obs = build_observation(news, config, providers)

    if config.variant in ("full", "agentic-only"):
        memory = run_rounds(obs, config, providers)
    else:
        memory = init_memory(obs)

    effective = config
    if config.variant in ("evidence-only", "agentic-only") and not config.disable_pkm:
        effective = replace(config, disable_pkm=True)

    if config.variant == "pkm-only":
        taxonomy = taxonomy or load_taxonomy()
        return decide(
            news, obs, memory, effective, providers,
            taxonomy=taxonomy, fewshots=fewshots, force_persuasion=True,
        )
    return decide(news, obs, memory, effective, providers, taxonomy=taxonomy, fewshots=fewshots)
