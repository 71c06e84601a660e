"""Exception hierarchy shared across the engine."""


class NewsverError(Exception):
    """Base class for all engine errors."""


class ConfigError(NewsverError):
    """A configuration document violates an invariant."""


class ProviderError(NewsverError):
    """Base class for external-provider failures."""


class ProviderUnavailable(ProviderError):
    """Network, auth, or missing-credential failure against a live service."""


class ReplayMiss(ProviderError):
    """Replay mode saw a request that was never recorded."""


class UnresolvableImage(ProviderError):
    """The image reference cannot be resolved by the vision provider."""


class MalformedResponse(ProviderError):
    """A provider response could not be parsed into the expected structure."""


class SchemaError(NewsverError):
    """An input file violates its schema (carries a line number when known)."""
