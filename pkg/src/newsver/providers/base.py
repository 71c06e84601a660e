"""Provider façade: uniform access to every external service.

All pipeline code talks to a ProviderSet, which validates preconditions,
counts calls per stage/operation, and routes through the record/replay
cache when one is configured.
"""

import hashlib
import json
import logging
import threading
from dataclasses import dataclass
from datetime import date
from typing import Protocol

from ..errors import ProviderUnavailable, ReplayMiss, UnresolvableImage
from .credibility import CredibilityTable, validate_domain
from .replay import ReplayCache

logger = logging.getLogger(__name__)

RESPONSE_CONTRACTS = ("free_text", "structured_record")

# Semantically meaningful failures are cached too, so replay reproduces the
# pipeline's degradation paths. Transient failures are never cached.
_ERROR_KEY = "__provider_error__"


@dataclass(frozen=True)
class LlmRequest:
    """One text-completion request, keyed for record/replay by content."""

    stage: str
    prompt: str
    temperature: float
    response_contract: str = "free_text"

    def __post_init__(self):
        if self.response_contract not in RESPONSE_CONTRACTS:
            raise ValueError(f"unknown response contract: {self.response_contract}")
        if not 0.0 <= self.temperature <= 2.0:
            raise ValueError("temperature must lie in [0, 2]")

    def payload(self) -> dict:
        return {
            "stage": self.stage,
            "prompt": self.prompt,
            "temperature": self.temperature,
            "response_contract": self.response_contract,
        }


@dataclass(frozen=True)
class RawSearchHit:
    url: str
    title: str
    snippet: str
    rank: int
    published_date: date | None = None

    def __post_init__(self):
        if self.rank < 1:
            raise ValueError("rank must be >= 1")


@dataclass(frozen=True)
class RawImageHit:
    image_url: str
    article_url: str
    web_entities: tuple[str, ...]
    article_title: str
    article_summary: str
    published_date: date | None = None


def request_hash(op: str, payload: dict) -> str:
    """Stable content hash: depends only on the operation and its payload."""
    canonical = json.dumps({"op": op, "request": payload}, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


class LlmBackend(Protocol):
    def complete(self, request: LlmRequest) -> str: ...


class SearchBackend(Protocol):
    def search(self, query: str, max_results: int) -> list[RawSearchHit]: ...


class VisionBackend(Protocol):
    def reverse_search(self, image: str) -> list[RawImageHit]: ...

    def entities(self, image: str) -> list[str]: ...


class SimilarityBackend(Protocol):
    def score(self, a: str, b: str) -> float: ...


def _hit_to_dict(hit: RawSearchHit) -> dict:
    return {
        "url": hit.url,
        "title": hit.title,
        "snippet": hit.snippet,
        "rank": hit.rank,
        "published_date": hit.published_date.isoformat() if hit.published_date else None,
    }


def _hit_from_dict(raw: dict) -> RawSearchHit:
    published = raw.get("published_date")
    return RawSearchHit(
        url=raw["url"],
        title=raw["title"],
        snippet=raw["snippet"],
        rank=raw["rank"],
        published_date=date.fromisoformat(published) if published else None,
    )


def _image_hit_to_dict(hit: RawImageHit) -> dict:
    return {
        "image_url": hit.image_url,
        "article_url": hit.article_url,
        "web_entities": list(hit.web_entities),
        "article_title": hit.article_title,
        "article_summary": hit.article_summary,
        "published_date": hit.published_date.isoformat() if hit.published_date else None,
    }


def _image_hit_from_dict(raw: dict) -> RawImageHit:
    published = raw.get("published_date")
    return RawImageHit(
        image_url=raw["image_url"],
        article_url=raw["article_url"],
        web_entities=tuple(raw["web_entities"]),
        article_title=raw["article_title"],
        article_summary=raw["article_summary"],
        published_date=date.fromisoformat(published) if published else None,
    )


class ProviderSet:
    """Bundles all backends behind one object with per-stage call counting.

    mode:
      live    — call backends directly
      record  — read-through cache: serve recorded responses, record fresh ones
      replay  — cache only; an unseen request raises ReplayMiss
    """

    def __init__(
        self,
        llm: LlmBackend | None = None,
        search: SearchBackend | None = None,
        vision: VisionBackend | None = None,
        similarity: SimilarityBackend | None = None,
        credibility: CredibilityTable | None = None,
        cache: ReplayCache | None = None,
        mode: str = "live",
    ):
        if mode not in ("live", "record", "replay"):
            raise ValueError(f"unknown provider mode: {mode}")
        if mode in ("record", "replay") and cache is None:
            raise ValueError(f"mode {mode} requires a replay cache")
        self.llm = llm
        self.search = search
        self.vision = vision
        self.similarity = similarity
        self.credibility = credibility or CredibilityTable({})
        self.cache = cache
        self.mode = mode
        self._counts: dict[str, int] = {}
        self._lock = threading.Lock()

    def call_counts(self) -> dict[str, int]:
        with self._lock:
            return dict(self._counts)

    def _count(self, key: str) -> None:
        with self._lock:
            self._counts[key] = self._counts.get(key, 0) + 1

    @staticmethod
    def _decode_stored(stored, decode):
        if isinstance(stored, dict) and _ERROR_KEY in stored:
            raise UnresolvableImage(stored.get("message", "recorded unresolvable image"))
        return decode(stored)

    def _dispatch(self, op: str, payload: dict, live_call, encode, decode):
        """Run one provider operation through the configured mode."""
        if self.mode == "replay":
            stored = self.cache.get(op, payload)
            if stored is None:
                raise ReplayMiss(f"no recorded response for {op} ({request_hash(op, payload)[:12]})")
            return self._decode_stored(stored, decode)
        if self.mode == "record":
            stored = self.cache.get(op, payload)
            if stored is not None:
                return self._decode_stored(stored, decode)
            try:
                result = live_call()
            except UnresolvableImage as exc:
                self.cache.put(op, payload, {_ERROR_KEY: "unresolvable_image", "message": str(exc)})
                raise
            self.cache.put(op, payload, encode(result))
            return result
        return live_call()

    # --- operations ------------------------------------------------------

    def llm_complete(self, request: LlmRequest) -> str:
        self._count(f"llm:{request.stage}")

        def live():
            if self.llm is None:
                raise ProviderUnavailable("no LLM backend configured")
            return self.llm.complete(request)

        return self._dispatch("llm_complete", request.payload(), live, lambda r: r, lambda r: r)

    def search_web(self, query: str, max_results: int) -> list[RawSearchHit]:
        if not query.strip():
            raise ValueError("query must be non-empty")
        if max_results < 1:
            raise ValueError("max_results must be >= 1")
        self._count("search_web")
        payload = {"query": query, "max_results": max_results}

        def live():
            if self.search is None:
                raise ProviderUnavailable("no search backend configured")
            return self.search.search(query, max_results)[:max_results]

        return self._dispatch(
            "search_web",
            payload,
            live,
            lambda hits: [_hit_to_dict(h) for h in hits],
            lambda raw: [_hit_from_dict(h) for h in raw],
        )

    def reverse_image_search(self, image: str) -> list[RawImageHit]:
        if not image.strip():
            raise ValueError("image reference must be non-empty")
        self._count("reverse_image_search")
        payload = {"image": image}

        def live():
            if self.vision is None:
                raise ProviderUnavailable("no vision backend configured")
            return self.vision.reverse_search(image)

        return self._dispatch(
            "reverse_image_search",
            payload,
            live,
            lambda hits: [_image_hit_to_dict(h) for h in hits],
            lambda raw: [_image_hit_from_dict(h) for h in raw],
        )

    def extract_image_entities(self, image: str) -> list[str]:
        if not image.strip():
            raise ValueError("image reference must be non-empty")
        self._count("extract_image_entities")
        payload = {"image": image}

        def live():
            if self.vision is None:
                raise ProviderUnavailable("no vision backend configured")
            return list(self.vision.entities(image))

        return self._dispatch("extract_image_entities", payload, live, list, list)

    def semantic_similarity(self, a: str, b: str) -> float:
        if not a.strip() or not b.strip():
            raise ValueError("similarity inputs must be non-empty")
        self._count("semantic_similarity")
        payload = {"a": a, "b": b}

        def live():
            if self.similarity is None:
                raise ProviderUnavailable("no similarity backend configured")
            return float(self.similarity.score(a, b))

        score = self._dispatch("semantic_similarity", payload, live, float, float)
        return min(1.0, max(0.0, score))

    def lookup_domain_credibility(self, domain: str):
        """Total function over normalized registrable domains."""
        validate_domain(domain)
        return self.credibility.lookup(domain)
