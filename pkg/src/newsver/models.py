"""Domain types shared by every pipeline stage.

All types are immutable value objects: safe to share across threads and to
use as replay-cache keys. Collections are stored as tuples for that reason.
"""

from dataclasses import dataclass
from datetime import date
from enum import Enum


class Label(str, Enum):
    REAL = "REAL"
    FAKE = "FAKE"


class Verdict(str, Enum):
    REAL = "REAL"
    FAKE = "FAKE"
    UNCERTAIN = "UNCERTAIN"


class Stance(str, Enum):
    SUPPORTING = "SUPPORTING"
    CONTRADICTING = "CONTRADICTING"
    NEUTRAL = "NEUTRAL"


class Tier(str, Enum):
    HIGH = "HIGH"
    MEDIUM = "MEDIUM"
    LOW = "LOW"


class EvidenceKind(str, Enum):
    TEXT = "TEXT"
    IMAGE = "IMAGE"


class CredibilityRating(str, Enum):
    """Source rating as found in the domain-credibility table."""

    HIGH = "High"
    MEDIUM = "Medium"
    UNKNOWN = "Unknown"
    LOW = "Low"


class Persona(str, Enum):
    SUPERVISOR = "SUPERVISOR"
    JOURNALIST = "JOURNALIST"
    LEGAL = "LEGAL"
    SCIENTIFIC = "SCIENTIFIC"


def tier_for(reliability: float, alpha_h: float, alpha_m: float) -> Tier:
    """Tier is a total function of (reliability, alpha_h, alpha_m).

    HIGH strictly above alpha_h, MEDIUM in (alpha_m, alpha_h], LOW otherwise.
    """
    if reliability > alpha_h:
        return Tier.HIGH
    if reliability > alpha_m:
        return Tier.MEDIUM
    return Tier.LOW


@dataclass(frozen=True)
class NewsItem:
    """One article under verification."""

    id: str
    headline: str
    body: str
    image: str | None = None
    gold_label: Label | None = None

    def __post_init__(self):
        if not self.headline.strip():
            raise ValueError("headline must be non-empty")


@dataclass(frozen=True)
class Claim:
    """Concise, entity-aware statement distilled from headline + body."""

    text: str
    entities: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.text.strip():
            raise ValueError("claim text must be non-empty")


@dataclass(frozen=True)
class ImageSummary:
    """Textual rendering of the article image plus its detected entities."""

    text: str
    entities: tuple[str, ...] = ()

    def __post_init__(self):
        if self.entities and not self.text.strip():
            raise ValueError("image summary text must be non-empty when entities are present")


@dataclass(frozen=True)
class EvidenceDoc:
    """One retrieved evidence candidate with its component and fused scores.

    `eid` is assigned at bundle assembly (T1.., I1..); `provider_rank` travels
    with the candidate so that score ties break deterministically. `stance`
    stays None until the stance-tagging step.
    """

    url: str
    domain: str
    title: str
    snippet: str
    kind: EvidenceKind
    provider_rank: int
    published_date: date | None = None
    s1: float = 0.0
    s2: float = 0.0
    s3: float = 0.0
    s4: float = 0.0
    reliability: float = 0.0
    tier: Tier = Tier.LOW
    stance: Stance | None = None
    eid: str = ""

    def __post_init__(self):
        for name in ("s1", "s2", "s3", "s4", "reliability"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {value}")
        if self.provider_rank < 1:
            raise ValueError("provider_rank must be >= 1")

    @property
    def text(self) -> str:
        """Scoring surface: title plus snippet."""
        return f"{self.title} {self.snippet}".strip()


@dataclass(frozen=True)
class KGTriplet:
    """Entity-relation fact tagged with its claimed knowledge source."""

    subject: str
    relation: str
    obj: str
    source: str
    eid: str = ""

    VALID_SOURCES = ("wikidata", "dbpedia", "googlekg", "llm-internal")

    def __post_init__(self):
        if not (self.subject.strip() and self.relation.strip() and self.obj.strip()):
            raise ValueError("triplet components must be non-empty")
        if self.source not in self.VALID_SOURCES:
            raise ValueError(f"unknown triplet source: {self.source}")


@dataclass(frozen=True)
class EvidenceBundle:
    """Ranked textual and visual evidence plus knowledge-graph triplets."""

    textual: tuple[EvidenceDoc, ...] = ()
    visual: tuple[EvidenceDoc, ...] = ()
    kg: tuple[KGTriplet, ...] = ()

    def all_docs(self) -> tuple[EvidenceDoc, ...]:
        return self.textual + self.visual

    def ids(self) -> frozenset[str]:
        doc_ids = {d.eid for d in self.all_docs()}
        doc_ids.update(t.eid for t in self.kg)
        doc_ids.discard("")
        return frozenset(doc_ids)

    @property
    def empty(self) -> bool:
        return not (self.textual or self.visual or self.kg)


@dataclass(frozen=True)
class ObservationBundle:
    """Everything the reasoning agents may observe about one item."""

    headline: str
    preprocessed_body: str
    claim: Claim
    evidence: EvidenceBundle
    image_summary: ImageSummary | None = None


@dataclass(frozen=True)
class MemoryEntry:
    """One persona question/answer pair with its synthesized insight."""

    round: int
    persona: Persona
    question: str
    answer: str
    insight: str

    def __post_init__(self):
        if self.round < 1:
            raise ValueError("round must be >= 1")
        if not self.question.strip() or not self.answer.strip():
            raise ValueError("question and answer must be non-empty")


@dataclass(frozen=True)
class PersuasionReport:
    """Output of the persuasion-analysis agent."""

    activations: tuple[int, ...]
    spans: tuple[tuple[int, str], ...]
    category_counts: tuple[int, ...]
    index: float
    summary: str

    def __post_init__(self):
        if any(a not in (0, 1) for a in self.activations):
            raise ValueError("activations must be a bit vector")
        if not 0.0 <= self.index <= 1.0:
            raise ValueError("persuasion index must be in [0, 1]")
        if not any(self.activations) and (self.index != 0.0 or self.spans):
            raise ValueError("zero activations require index 0 and no spans")


@dataclass(frozen=True)
class Memory:
    """Append-only contextual memory built over the reasoning rounds."""

    entries: tuple[MemoryEntry, ...] = ()
    insights: tuple[str, ...] = ()
    evidence_digest: str = ""
    persuasion: PersuasionReport | None = None

    def questions(self) -> tuple[str, ...]:
        return tuple(e.question for e in self.entries)

    def with_entry(self, entry: MemoryEntry) -> "Memory":
        return Memory(
            entries=self.entries + (entry,),
            insights=self.insights,
            evidence_digest=self.evidence_digest,
            persuasion=self.persuasion,
        )


@dataclass(frozen=True)
class VerdictRecord:
    """Structured verdict for one item, with its full reasoning trace.

    `image_summary` rides along so the distillation export can fill its
    four-slot schema without re-running providers.
    """

    item_id: str
    verdict: Verdict
    confidence: int
    justification: str
    citations: tuple[str, ...]
    rule_verdict: Verdict | None
    pkm_invoked: bool
    trace: Memory
    image_summary: str = ""

    def __post_init__(self):
        if not 0 <= self.confidence <= 100:
            raise ValueError("confidence must be an integer in [0, 100]")
