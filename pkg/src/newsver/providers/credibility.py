"""Domain-credibility table and registrable-domain extraction."""

import re
from pathlib import Path
from urllib.parse import urlparse

from ..errors import SchemaError
from ..models import CredibilityRating

_DOMAIN_RE = re.compile(r"^[a-z0-9][a-z0-9.-]*\.[a-z0-9-]+$")

# Common two-level public suffixes so e.g. bbc.co.uk keeps three labels.
_SECOND_LEVEL_SUFFIXES = {
    "co", "com", "net", "org", "gov", "edu", "ac", "gob", "or", "ne",
}


def validate_domain(domain: str) -> None:
    """Reject anything that is not a lowercase registrable domain."""
    if not _DOMAIN_RE.match(domain):
        raise ValueError(f"not a normalized registrable domain: {domain!r}")


def registrable_domain(url: str) -> str:
    """Best-effort registrable domain of a URL (heuristic, no suffix list).

    Keeps three labels for ccTLDs behind common second-level suffixes
    (bbc.co.uk), two labels otherwise (news.example.com -> example.com).
    """
    host = urlparse(url if "//" in url else f"//{url}").hostname or ""
    host = host.lower().strip(".")
    if host.startswith("www."):
        host = host[4:]
    labels = host.split(".")
    if len(labels) <= 2:
        return host
    if len(labels[-1]) == 2 and labels[-2] in _SECOND_LEVEL_SUFFIXES:
        return ".".join(labels[-3:])
    return ".".join(labels[-2:])


class CredibilityTable:
    """Domain -> rating map; absent domains rate Unknown."""

    def __init__(self, ratings: dict[str, CredibilityRating]):
        self._ratings = dict(ratings)

    def lookup(self, domain: str) -> CredibilityRating:
        return self._ratings.get(domain, CredibilityRating.UNKNOWN)

    def __len__(self) -> int:
        return len(self._ratings)


def load_credibility_table(path: str | Path) -> CredibilityTable:
    """Parse a "domain<TAB>tier" snapshot file; blank lines and # comments skipped."""
    ratings: dict[str, CredibilityRating] = {}
    text = Path(path).read_text(encoding="utf-8")
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise SchemaError(f"{path}:{lineno}: expected 'domain<TAB>tier'")
        domain, tier = parts[0].strip(), parts[1].strip()
        try:
            validate_domain(domain)
            ratings[domain] = CredibilityRating(tier)
        except ValueError as exc:
            raise SchemaError(f"{path}:{lineno}: {exc}") from exc
    return CredibilityTable(ratings)
