"""Live HTTP backends. Credentials come from environment variables:

    LLM_API_KEY, LLM_API_BASE      — OpenAI-compatible chat-completions service
    SEARCH_API_KEY, SEARCH_ENGINE_ID — programmable web search
    VISION_API_KEY                 — image annotation (web detection + labels)

Every backend shares one token-bucket rate limiter when configured.
"""

import os
import threading
import time
from datetime import date, datetime

import requests

from ..errors import ProviderUnavailable, UnresolvableImage
from .base import LlmRequest, RawImageHit, RawSearchHit

_TIMEOUT = 60


class TokenBucket:
    """Thread-safe limiter: at most `rate` calls per second, burst `capacity`."""

    def __init__(self, rate: float, capacity: int | None = None):
        self.rate = rate
        self.capacity = capacity or max(1, int(rate))
        self._tokens = float(self.capacity)
        self._updated = time.monotonic()
        self._lock = threading.Lock()

    def acquire(self) -> None:
        while True:
            with self._lock:
                now = time.monotonic()
                self._tokens = min(self.capacity, self._tokens + (now - self._updated) * self.rate)
                self._updated = now
                if self._tokens >= 1.0:
                    self._tokens -= 1.0
                    return
                wait = (1.0 - self._tokens) / self.rate
            time.sleep(wait)


def _parse_date(value) -> date | None:
    if not value:
        return None
    try:
        return datetime.fromisoformat(str(value)[:19]).date()
    except ValueError:
        return None


class HttpLlmBackend:
    """OpenAI-compatible /chat/completions client."""

    def __init__(self, api_key: str | None = None, api_base: str | None = None,
                 model: str = "gpt-4o-mini", limiter: TokenBucket | None = None):
        self.api_key = api_key or os.environ.get("LLM_API_KEY")
        self.api_base = (api_base or os.environ.get("LLM_API_BASE") or "https://api.openai.com/v1").rstrip("/")
        self.model = model
        self.limiter = limiter

    def complete(self, request: LlmRequest) -> str:
        if not self.api_key:
            raise ProviderUnavailable("LLM_API_KEY is not set")
        if self.limiter:
            self.limiter.acquire()
        body = {
            "model": self.model,
            "temperature": request.temperature,
            "messages": [{"role": "user", "content": request.prompt}],
        }
        if request.response_contract == "structured_record":
            body["response_format"] = {"type": "json_object"}
        try:
            resp = requests.post(
                f"{self.api_base}/chat/completions",
                json=body,
                headers={"Authorization": f"Bearer {self.api_key}"},
                timeout=_TIMEOUT,
            )
            resp.raise_for_status()
            return resp.json()["choices"][0]["message"]["content"]
        except (requests.RequestException, KeyError, IndexError, ValueError) as exc:
            raise ProviderUnavailable(f"LLM request failed: {exc}") from exc


class HttpSearchBackend:
    """Programmable-search client (customsearch-style JSON API)."""

    def __init__(self, api_key: str | None = None, engine_id: str | None = None,
                 endpoint: str = "https://www.googleapis.com/customsearch/v1",
                 limiter: TokenBucket | None = None):
        self.api_key = api_key or os.environ.get("SEARCH_API_KEY")
        self.engine_id = engine_id or os.environ.get("SEARCH_ENGINE_ID")
        self.endpoint = endpoint
        self.limiter = limiter

    def search(self, query: str, max_results: int) -> list[RawSearchHit]:
        if not self.api_key or not self.engine_id:
            raise ProviderUnavailable("SEARCH_API_KEY / SEARCH_ENGINE_ID are not set")
        hits: list[RawSearchHit] = []
        start = 1
        try:
            while len(hits) < max_results:
                if self.limiter:
                    self.limiter.acquire()
                resp = requests.get(
                    self.endpoint,
                    params={
                        "key": self.api_key,
                        "cx": self.engine_id,
                        "q": query,
                        "num": min(10, max_results - len(hits)),
                        "start": start,
                    },
                    timeout=_TIMEOUT,
                )
                resp.raise_for_status()
                items = resp.json().get("items", [])
                if not items:
                    break
                for item in items:
                    meta = (item.get("pagemap", {}).get("metatags") or [{}])[0]
                    hits.append(
                        RawSearchHit(
                            url=item.get("link", ""),
                            title=item.get("title", ""),
                            snippet=item.get("snippet", ""),
                            rank=len(hits) + 1,
                            published_date=_parse_date(
                                meta.get("article:published_time") or meta.get("date")
                            ),
                        )
                    )
                start += len(items)
        except requests.RequestException as exc:
            raise ProviderUnavailable(f"search request failed: {exc}") from exc
        return hits[:max_results]


class HttpVisionBackend:
    """Image-annotation client: web detection for reverse search, labels for entities."""

    def __init__(self, api_key: str | None = None,
                 endpoint: str = "https://vision.googleapis.com/v1/images:annotate",
                 limiter: TokenBucket | None = None):
        self.api_key = api_key or os.environ.get("VISION_API_KEY")
        self.endpoint = endpoint
        self.limiter = limiter

    def _annotate(self, image: str, features: list[dict]) -> dict:
        if not self.api_key:
            raise ProviderUnavailable("VISION_API_KEY is not set")
        if self.limiter:
            self.limiter.acquire()
        if image.startswith(("http://", "https://")):
            image_part = {"source": {"imageUri": image}}
        else:
            import base64
            from pathlib import Path

            path = Path(image)
            if not path.exists():
                raise UnresolvableImage(f"image file not found: {image}")
            image_part = {"content": base64.b64encode(path.read_bytes()).decode("ascii")}
        try:
            resp = requests.post(
                self.endpoint,
                params={"key": self.api_key},
                json={"requests": [{"image": image_part, "features": features}]},
                timeout=_TIMEOUT,
            )
            resp.raise_for_status()
            return resp.json()["responses"][0]
        except (requests.RequestException, KeyError, IndexError, ValueError) as exc:
            raise ProviderUnavailable(f"vision request failed: {exc}") from exc

    def reverse_search(self, image: str) -> list[RawImageHit]:
        result = self._annotate(image, [{"type": "WEB_DETECTION", "maxResults": 30}])
        detection = result.get("webDetection", {})
        entities = tuple(
            e["description"] for e in detection.get("webEntities", []) if e.get("description")
        )
        hits = []
        for page in detection.get("pagesWithMatchingImages", []):
            images = page.get("fullMatchingImages") or page.get("partialMatchingImages") or [{}]
            hits.append(
                RawImageHit(
                    image_url=images[0].get("url", ""),
                    article_url=page.get("url", ""),
                    web_entities=entities,
                    article_title=page.get("pageTitle", ""),
                    article_summary=page.get("pageTitle", ""),
                    published_date=None,
                )
            )
        return hits

    def entities(self, image: str) -> list[str]:
        result = self._annotate(
            image,
            [{"type": "LABEL_DETECTION", "maxResults": 10}, {"type": "TEXT_DETECTION"}],
        )
        labels = [a["description"] for a in result.get("labelAnnotations", []) if a.get("description")]
        text = result.get("fullTextAnnotation", {}).get("text", "").strip()
        if text:
            labels.append(text.splitlines()[0])
        return labels
