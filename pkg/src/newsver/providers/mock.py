"""Deterministic offline backends.

TokenOverlapSimilarity is also the default similarity backend for live runs
that have no embedding service configured: symmetric, reflexive, and cheap.
"""

from collections import Counter

from ..textutil import tokenize
from .base import RawImageHit, RawSearchHit


class TokenOverlapSimilarity:
    """Bag-of-tokens F1 between two texts; sim(a, a) = 1, disjoint = 0."""

    def score(self, a: str, b: str) -> float:
        tokens_a = Counter(tokenize(a))
        tokens_b = Counter(tokenize(b))
        if not tokens_a or not tokens_b:
            return 0.0
        overlap = sum((tokens_a & tokens_b).values())
        if overlap == 0:
            return 0.0
        precision = overlap / sum(tokens_b.values())
        recall = overlap / sum(tokens_a.values())
        return 2 * precision * recall / (precision + recall)


class StaticSearchBackend:
    """Serves a fixed hit list, truncated to max_results."""

    def __init__(self, hits: list[RawSearchHit]):
        self.hits = list(hits)

    def search(self, query: str, max_results: int) -> list[RawSearchHit]:
        return self.hits[:max_results]


class StaticVisionBackend:
    """Serves fixed reverse-search hits and entity lists keyed by image ref."""

    def __init__(
        self,
        hits_by_image: dict[str, list[RawImageHit]] | None = None,
        entities_by_image: dict[str, list[str]] | None = None,
    ):
        self.hits_by_image = hits_by_image or {}
        self.entities_by_image = entities_by_image or {}

    def reverse_search(self, image: str) -> list[RawImageHit]:
        from ..errors import UnresolvableImage

        if image not in self.hits_by_image:
            raise UnresolvableImage(f"unknown image reference: {image}")
        return list(self.hits_by_image[image])

    def entities(self, image: str) -> list[str]:
        from ..errors import UnresolvableImage

        if image not in self.entities_by_image:
            raise UnresolvableImage(f"unknown image reference: {image}")
        return list(self.entities_by_image[image])
