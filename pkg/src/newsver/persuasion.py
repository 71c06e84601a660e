"""Persuasion analysis: gated technique detection and the persuasion index.

Invoked at most once per item, and only when the first-pass classifier is
uncertain. A single policy call detects techniques with verbatim spans and
drafts the narrative summary; everything downstream of that call is pure
arithmetic over the fixed technique/category taxonomy.
"""

import logging
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .config import PipelineConfig
from .errors import MalformedResponse, SchemaError
from .models import Claim, Memory, PersuasionReport
from .providers.base import LlmRequest, ProviderSet
from .textutil import parse_json_object, truncate_sentences

logger = logging.getLogger(__name__)

CATEGORY_ORDER = (
    "justification",
    "simplification",
    "distraction",
    "call",
    "reputation attack",
    "manipulative wording",
)

NO_TECHNIQUES_SUMMARY = "no persuasion techniques detected"

DETECTION_PROMPT = """Analyze the news content below for persuasion techniques. The closed set of \
recognized techniques is:

{technique_list}

Claim: {claim}
Body: {body}

Report every technique you detect with a short phrase quoted VERBATIM from the claim or body, \
plus a narrative summary of at most 3 sentences naming each detected technique. If none are \
present, return an empty list.

Respond with strict JSON:
{{"techniques": [{{"technique": "...", "span": "..."}}], "summary": "..."}}"""


@dataclass(frozen=True)
class PersuasionTaxonomy:
    """23 techniques grouped into 6 categories via a one-hot incidence matrix."""

    techniques: tuple[str, ...]
    categories: tuple[str, ...]
    incidence: tuple[tuple[int, ...], ...]  # categories x techniques

    def __post_init__(self):
        if len(self.techniques) != 23:
            raise SchemaError(f"taxonomy must define 23 techniques, got {len(self.techniques)}")
        if len(self.categories) != 6:
            raise SchemaError(f"taxonomy must define 6 categories, got {len(self.categories)}")
        for col in range(len(self.techniques)):
            total = sum(row[col] for row in self.incidence)
            if total != 1:
                raise SchemaError(
                    f"technique {self.techniques[col]!r} must belong to exactly one category"
                )

    @property
    def category_sizes(self) -> tuple[int, ...]:
        return tuple(sum(row) for row in self.incidence)

    def technique_index(self, name: str) -> int | None:
        try:
            return self.techniques.index(name)
        except ValueError:
            return None


def load_taxonomy(path: str | Path | None = None) -> PersuasionTaxonomy:
    """Read the technique<TAB>category file (packaged default when no path given)."""
    if path is None:
        text = resources.files("newsver.assets").joinpath("taxonomy.tsv").read_text(encoding="utf-8")
        origin = "builtin taxonomy"
    else:
        text = Path(path).read_text(encoding="utf-8")
        origin = str(path)

    techniques: list[str] = []
    category_of: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise SchemaError(f"{origin}:{lineno}: expected 'technique<TAB>category'")
        technique, category = parts[0].strip(), parts[1].strip()
        if category not in CATEGORY_ORDER:
            raise SchemaError(f"{origin}:{lineno}: unknown category {category!r}")
        if technique in category_of:
            raise SchemaError(f"{origin}:{lineno}: duplicate technique {technique!r}")
        techniques.append(technique)
        category_of[technique] = category

    incidence = tuple(
        tuple(1 if category_of[t] == cat else 0 for t in techniques) for cat in CATEGORY_ORDER
    )
    return PersuasionTaxonomy(
        techniques=tuple(techniques), categories=CATEGORY_ORDER, incidence=incidence
    )


def detect_techniques(
    claim: Claim,
    body: str,
    memory: Memory,
    taxonomy: PersuasionTaxonomy,
    config: PipelineConfig,
    providers: ProviderSet,
) -> tuple[tuple[int, ...], tuple[tuple[int, str], ...], str | None]:
    """Single policy call: (activations, verbatim spans, draft narrative).

    Technique names outside the taxonomy are dropped, as is any span not
    verbatim-contained in the claim or body. A twice-malformed response
    degrades to no detections.
    """
    prompt = DETECTION_PROMPT.format(
        technique_list="\n".join(f"- {t}" for t in taxonomy.techniques),
        claim=claim.text,
        body=body,
    )
    request = LlmRequest(
        stage="persuasion",
        prompt=prompt,
        temperature=config.temperature("persuasion"),
        response_contract="structured_record",
    )
    record = None
    for attempt in range(2):
        response = providers.llm_complete(request)
        try:
            record = parse_json_object(response)
            if not isinstance(record.get("techniques", []), list):
                raise MalformedResponse("techniques must be a list")
            break
        except MalformedResponse as exc:
            logger.warning("persuasion detection attempt %d unparseable: %s", attempt + 1, exc)
            record = None
            request = LlmRequest(
                stage="persuasion",
                prompt=prompt + "\n\nYour previous reply was not valid JSON. Reply with JSON only.",
                temperature=config.temperature("persuasion"),
                response_contract="structured_record",
            )
    if record is None:
        logger.warning("persuasion detection degraded to zero activations")
        return (0,) * len(taxonomy.techniques), (), None

    haystack = f"{claim.text}\n{body}"
    activations = [0] * len(taxonomy.techniques)
    spans: list[tuple[int, str]] = []
    for item in record.get("techniques", []):
        if not isinstance(item, dict):
            continue
        index = taxonomy.technique_index(str(item.get("technique", "")).strip())
        if index is None:
            continue
        span = str(item.get("span", "")).strip()
        if not span or span not in haystack:
            continue
        activations[index] = 1
        spans.append((index, span))
    summary = record.get("summary")
    summary = str(summary).strip() if summary else None
    return tuple(activations), tuple(spans), summary


def category_counts(z: tuple[int, ...], taxonomy: PersuasionTaxonomy) -> tuple[int, ...]:
    """Incidence-matrix product: per-category count of active techniques."""
    if len(z) != len(taxonomy.techniques):
        raise ValueError(f"activation vector must have length {len(taxonomy.techniques)}")
    return tuple(sum(r * a for r, a in zip(row, z)) for row in taxonomy.incidence)


def persuasion_index(
    u: tuple[int, ...], beta: tuple[float, ...], taxonomy: PersuasionTaxonomy
) -> float:
    """Importance-weighted, size-normalized activation fraction in [0, 1].

    Each category count is divided by the category's technique count so a
    fully-activated article scores exactly 1 and a quiet one exactly 0.
    """
    if len(u) != len(taxonomy.categories) or len(beta) != len(taxonomy.categories):
        raise ValueError("u and beta must have one entry per category")
    if any(b <= 0 for b in beta):
        raise ValueError("beta importances must be > 0")
    sizes = taxonomy.category_sizes
    if any(not 0 <= count <= size for count, size in zip(u, sizes)):
        raise ValueError("category counts out of range")
    weighted = sum(b * count / size for b, count, size in zip(beta, u, sizes))
    return weighted / sum(beta)


def summarize_persuasion(
    z: tuple[int, ...],
    spans: tuple[tuple[int, str], ...],
    taxonomy: PersuasionTaxonomy,
    narrative: str | None = None,
) -> str:
    """Narrative from the policy call, or a template naming the techniques."""
    if not any(z):
        return NO_TECHNIQUES_SUMMARY
    if narrative:
        return truncate_sentences(narrative, 3)
    names = [taxonomy.techniques[i] for i, active in enumerate(z) if active]
    return f"Detected: {', '.join(names)}."


def record_persuasion(memory: Memory, report: PersuasionReport) -> Memory:
    """Record the report and append one insight; replaces any earlier report."""
    insight = f"persuasion index = {report.index:.4f}; {report.summary}"
    return Memory(
        entries=memory.entries,
        insights=memory.insights + (insight,),
        evidence_digest=memory.evidence_digest,
        persuasion=report,
    )


def run_persuasion_stage(
    claim: Claim,
    body: str,
    memory: Memory,
    taxonomy: PersuasionTaxonomy,
    config: PipelineConfig,
    providers: ProviderSet,
) -> tuple[PersuasionReport, Memory]:
    """Full persuasion pass: detect, aggregate, index, summarize, record."""
    z, spans, narrative = detect_techniques(claim, body, memory, taxonomy, config, providers)
    u = category_counts(z, taxonomy)
    index = persuasion_index(u, config.beta, taxonomy)
    summary = summarize_persuasion(z, spans, taxonomy, narrative)
    report = PersuasionReport(
        activations=z, spans=spans, category_counts=u, index=index, summary=summary
    )
    return report, record_persuasion(memory, report)
