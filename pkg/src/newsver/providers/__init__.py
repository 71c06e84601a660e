from .base import (
    LlmRequest,
    ProviderSet,
    RawImageHit,
    RawSearchHit,
    request_hash,
)
from .credibility import (
    CredibilityTable,
    load_credibility_table,
    registrable_domain,
    validate_domain,
)
from .live import HttpLlmBackend, HttpSearchBackend, HttpVisionBackend, TokenBucket
from .mock import StaticSearchBackend, StaticVisionBackend, TokenOverlapSimilarity
from .replay import ReplayCache

__all__ = [
    "CredibilityTable",
    "HttpLlmBackend",
    "HttpSearchBackend",
    "HttpVisionBackend",
    "LlmRequest",
    "ProviderSet",
    "RawImageHit",
    "RawSearchHit",
    "ReplayCache",
    "StaticSearchBackend",
    "StaticVisionBackend",
    "TokenBucket",
    "TokenOverlapSimilarity",
    "load_credibility_table",
    "registrable_domain",
    "request_hash",
    "validate_domain",
]
