"""Evidence retrieval and reliability scoring.

Builds the three-part evidence bundle: ranked textual documents from web
search, ranked documents from reverse image search, and knowledge-graph
triplets. Every scored document carries four component scores — lexical
(BM25, min-max normalized over the candidate set), semantic, source
credibility, temporal consistency — fused into one reliability score.
"""

import logging
import math
from collections import Counter
from dataclasses import dataclass, replace
from datetime import date
from statistics import median_low

from .config import PipelineConfig
from .errors import MalformedResponse, UnresolvableImage
from .models import (
    Claim,
    EvidenceBundle,
    EvidenceDoc,
    EvidenceKind,
    KGTriplet,
    tier_for,
)
from .providers.base import LlmRequest, ProviderSet, RawImageHit, RawSearchHit
from .providers.credibility import registrable_domain
from .textutil import parse_json_array, tokenize

logger = logging.getLogger(__name__)

BM25_K1 = 1.5
BM25_B = 0.75
VISUAL_RELEVANCE_THRESHOLD = 0.3

KG_PROMPT = """List up to {limit} factual knowledge-graph triplets about these entities, drawing \
on Wikidata, DBpedia, or the Google Knowledge Graph where possible.

Entities: {entities}
Claim under verification: {claim}

Respond with a strict JSON array of objects:
[{{"subject": "...", "relation": "...", "object": "...", "source": "wikidata|dbpedia|googlekg|llm-internal"}}]"""

_SOURCE_ALIASES = {
    "wikidata": "wikidata",
    "dbpedia": "dbpedia",
    "googlekg": "googlekg",
    "google kg": "googlekg",
    "google knowledge graph": "googlekg",
    "llm-internal": "llm-internal",
    "llm": "llm-internal",
    "internal": "llm-internal",
}


@dataclass(frozen=True)
class ScoredCandidate:
    """Candidate document with its raw (pre-normalization) BM25 score."""

    doc: EvidenceDoc
    bm25_raw: float

    def __post_init__(self):
        if self.bm25_raw < 0:
            raise ValueError("bm25_raw must be non-negative")


def restrict_top_domains(hits: list[RawSearchHit], k1: int, dedup: bool = True) -> list[RawSearchHit]:
    """First k1 hits by rank, optionally keeping one hit per registrable domain."""
    if k1 < 1:
        raise ValueError("k1 must be >= 1")
    ordered = sorted(hits, key=lambda h: h.rank)
    if not dedup:
        return ordered[:k1]
    seen: set[str] = set()
    kept = []
    for hit in ordered:
        domain = registrable_domain(hit.url)
        if domain in seen:
            continue
        seen.add(domain)
        kept.append(hit)
        if len(kept) == k1:
            break
    return kept


def bm25_scores(claim: str, docs: list[str], k1: float = BM25_K1, b: float = BM25_B) -> list[float]:
    """Okapi BM25 of the claim against each doc, the candidate set as corpus.

    IDF = ln((N - n_t + 0.5) / (n_t + 0.5) + 1); tokens are lowercase runs
    of alphanumerics.
    """
    if not docs:
        raise ValueError("docs must be non-empty")
    tokenized = [tokenize(d) for d in docs]
    n_docs = len(tokenized)
    doc_lens = [len(d) for d in tokenized]
    avgdl = sum(doc_lens) / n_docs
    doc_freq: Counter = Counter()
    for tokens in tokenized:
        doc_freq.update(set(tokens))

    query = tokenize(claim)
    scores = []
    for tokens, dl in zip(tokenized, doc_lens):
        freqs = Counter(tokens)
        norm = k1 * (1 - b + (b * dl / avgdl if avgdl > 0 else 0.0))
        score = 0.0
        for term in query:
            f = freqs.get(term, 0)
            if f == 0:
                continue
            n_t = doc_freq[term]
            idf = math.log((n_docs - n_t + 0.5) / (n_t + 0.5) + 1)
            score += idf * f * (k1 + 1) / (f + norm)
        scores.append(score)
    return scores


def normalize_sigma(raw: list[float]) -> list[float]:
    """Min-max over the candidate set; a degenerate (all-equal) set maps to 0.5."""
    if not raw:
        raise ValueError("raw scores must be non-empty")
    low, high = min(raw), max(raw)
    if high == low:
        return [0.5] * len(raw)
    return [(x - low) / (high - low) for x in raw]


def credibility_scores(docs: list[EvidenceDoc], providers: ProviderSet, config: PipelineConfig) -> list[float]:
    """Per-document source-credibility weight from the domain table."""
    return [
        config.credibility_weight(providers.lookup_domain_credibility(d.domain)) for d in docs
    ]


def temporal_scores(docs: list[EvidenceDoc], alpha_t: float) -> list[float]:
    """Closeness of each document's date to the candidate pool's median date.

    Dated documents score max(alpha_t, 1 - |days from median| / 365); undated
    documents score 0; a pool with no dates at all scores all zeros. The
    median of an even count is the lower middle, so it is an observed date.
    """
    dates = [d.published_date for d in docs if d.published_date is not None]
    if not dates:
        return [0.0] * len(docs)
    t_median: date = median_low(sorted(dates))
    scores = []
    for doc in docs:
        if doc.published_date is None:
            scores.append(0.0)
        else:
            delta_days = abs((doc.published_date - t_median).days)
            scores.append(max(alpha_t, 1.0 - delta_days / 365.0))
    return scores


def fuse_reliability(s: tuple[float, float, float, float], lam: tuple[float, float, float, float]) -> float:
    """Convex combination of the four component scores."""
    if len(s) != 4 or len(lam) != 4:
        raise ValueError("expected 4 scores and 4 weights")
    if any(not 0.0 <= x <= 1.0 for x in s):
        raise ValueError("component scores must lie in [0, 1]")
    if abs(sum(lam) - 1.0) > 1e-9:
        raise ValueError("weights must sum to 1")
    return sum(w * x for w, x in zip(lam, s))


def _score_candidates(
    candidates: list[EvidenceDoc],
    claim: Claim,
    retain: int,
    config: PipelineConfig,
    providers: ProviderSet,
) -> list[EvidenceDoc]:
    """Score, fuse, rank, and retain the top documents of one candidate pool."""
    if not candidates:
        return []
    raw_bm25 = bm25_scores(claim.text, [d.text for d in candidates])
    s1 = normalize_sigma(raw_bm25)
    s2 = [providers.semantic_similarity(claim.text, d.text) for d in candidates]
    s3 = credibility_scores(candidates, providers, config)
    s4 = temporal_scores(candidates, config.alpha_t)

    scored = []
    for doc, a, b_, c, d in zip(candidates, s1, s2, s3, s4):
        reliability = fuse_reliability((a, b_, c, d), config.lam)
        scored.append(
            replace(
                doc,
                s1=a,
                s2=b_,
                s3=c,
                s4=d,
                reliability=reliability,
                tier=tier_for(reliability, config.alpha_h, config.alpha_m),
            )
        )
    scored.sort(key=lambda d: (-d.reliability, d.provider_rank))
    return scored[:retain]


def select_textual_evidence(claim: Claim, config: PipelineConfig, providers: ProviderSet) -> list[EvidenceDoc]:
    """Web search on the claim, domain restriction, scoring, top-k1p retained.

    Over-fetches (2x the pool size) so domain dedup can still fill k1 slots.
    """
    hits = providers.search_web(claim.text, config.k1 * 2)
    hits = restrict_top_domains(hits, config.k1, dedup=config.dedup_domains)
    candidates = [
        EvidenceDoc(
            url=h.url,
            domain=registrable_domain(h.url),
            title=h.title,
            snippet=h.snippet,
            kind=EvidenceKind.TEXT,
            provider_rank=h.rank,
            published_date=h.published_date,
        )
        for h in hits
    ]
    return _score_candidates(candidates, claim, config.k1p, config, providers)


def select_visual_evidence(
    image: str, claim: Claim, config: PipelineConfig, providers: ProviderSet
) -> list[EvidenceDoc]:
    """Reverse image search, relevance filter, scoring, top-k2p retained.

    An unresolvable image degrades to an empty list so the pipeline continues.
    """
    try:
        hits = providers.reverse_image_search(image)
    except UnresolvableImage as exc:
        logger.warning("visual evidence skipped: %s", exc)
        return []

    relevant: list[RawImageHit] = []
    for hit in hits:
        if not hit.article_url.strip():
            continue
        surface = f"{hit.article_title} {hit.article_summary}".strip()
        if not surface:
            continue
        if providers.semantic_similarity(claim.text, surface) < VISUAL_RELEVANCE_THRESHOLD:
            continue
        relevant.append(hit)

    candidates = [
        EvidenceDoc(
            url=h.article_url,
            domain=registrable_domain(h.article_url),
            title=h.article_title,
            snippet=h.article_summary,
            kind=EvidenceKind.IMAGE,
            provider_rank=rank,
            published_date=h.published_date,
        )
        for rank, h in enumerate(relevant[: config.k2], start=1)
    ]
    return _score_candidates(candidates, claim, config.k2p, config, providers)


def retrieve_kg_triplets(claim: Claim, config: PipelineConfig, providers: ProviderSet) -> list[KGTriplet]:
    """One LLM query for up to k3 entity-relation facts about the claim's entities."""
    if not claim.entities:
        return []
    prompt = KG_PROMPT.format(
        limit=config.k3, entities=", ".join(claim.entities), claim=claim.text
    )
    request = LlmRequest(
        stage="kg",
        prompt=prompt,
        temperature=config.temperature("kg"),
        response_contract="structured_record",
    )
    for attempt in range(2):
        response = providers.llm_complete(request)
        try:
            entries = parse_json_array(response)
        except MalformedResponse as exc:
            logger.warning("triplet retrieval attempt %d unparseable: %s", attempt + 1, exc)
            request = LlmRequest(
                stage="kg",
                prompt=prompt + "\n\nYour previous reply was not a JSON array. Reply with JSON only.",
                temperature=config.temperature("kg"),
                response_contract="structured_record",
            )
            continue
        triplets = []
        for entry in entries:
            triplet = _parse_triplet(entry)
            if triplet is not None:
                triplets.append(triplet)
            if len(triplets) == config.k3:
                break
        return triplets
    return []


def _parse_triplet(entry) -> KGTriplet | None:
    if not isinstance(entry, dict):
        return None
    source = _SOURCE_ALIASES.get(str(entry.get("source", "")).strip().lower())
    if source is None:
        return None
    try:
        return KGTriplet(
            subject=str(entry.get("subject", "")).strip(),
            relation=str(entry.get("relation", "")).strip(),
            obj=str(entry.get("object", "")).strip(),
            source=source,
        )
    except ValueError:
        return None


def assemble_bundle(
    texts: list[EvidenceDoc],
    visuals: list[EvidenceDoc],
    triplets: list[KGTriplet],
) -> EvidenceBundle:
    """Combine the three evidence streams and assign stable evidence ids."""
    texts = sorted(texts, key=lambda d: (-d.reliability, d.provider_rank))
    visuals = sorted(visuals, key=lambda d: (-d.reliability, d.provider_rank))
    return EvidenceBundle(
        textual=tuple(replace(d, eid=f"T{i}") for i, d in enumerate(texts, start=1)),
        visual=tuple(replace(d, eid=f"I{i}") for i, d in enumerate(visuals, start=1)),
        kg=tuple(replace(t, eid=f"K{i}") for i, t in enumerate(triplets, start=1)),
    )
