"""Pseudo-labeling: stance tagging, rule-based preliminary verdict,
constrained LLM classification with persuasion-gated re-query, and the
canonical verdict-record rendering."""

import json
import logging
import math
import re
from dataclasses import dataclass, replace
from importlib import resources

from .config import PipelineConfig
from .errors import MalformedResponse
from .personas import render_memory
from .models import (
    Claim,
    EvidenceDoc,
    Memory,
    MemoryEntry,
    NewsItem,
    ObservationBundle,
    Persona,
    PersuasionReport,
    Stance,
    Tier,
    Verdict,
    VerdictRecord,
)
from .persuasion import PersuasionTaxonomy, load_taxonomy, run_persuasion_stage
from .providers.base import LlmRequest, ProviderSet
from .textutil import parse_json_object

logger = logging.getLogger(__name__)

_CITATION_RE = re.compile(r"\[([TIK]\d+)\]")
_EXCLAIM_RUN_RE = re.compile(r"!{3,}")

STANCE_PROMPT = """Classify the stance of the evidence item toward the claim.

Claim: {claim}
Evidence title: {title}
Evidence snippet: {snippet}

Reply with exactly one word: SUPPORTING, CONTRADICTING, or NEUTRAL."""

CLASSIFIER_PROMPT = """You are the final verdict classifier of a news-verification panel.

Policy:
- The memory below is your PRIMARY factual base; reason from it before anything else.
- Cite the memory/evidence ids you rely on, like [T1] or [K2].
- If you consult general world knowledge beyond the memory, mark it as (auxiliary knowledge).
- Output strict JSON only.

Worked examples:
{fewshots}

{memory}

Evidence stance aggregate: support={s_plus:.4f}, contradiction={s_minus:.4f}, \
high-tier support items={high_plus}, high-tier contradiction items={high_minus}.
Rule-based preliminary signal (informative, not binding): {preliminary}

Respond with strict JSON:
{{"verdict": "REAL|FAKE|UNCERTAIN", "confidence": 0.0, "justification": "...", "citations": ["T1"]}}"""

FALLBACK_JUSTIFICATION = "classifier response unparseable"


@dataclass(frozen=True)
class SupportAggregate:
    """Reliability-weighted stance totals plus the deterministic flags."""

    s_plus: float
    s_minus: float
    high_plus: int
    high_minus: int
    med_plus: float
    med_minus: float
    low_only_support: bool
    impl_flag: int

    def __post_init__(self):
        if min(self.s_plus, self.s_minus, self.med_plus, self.med_minus) < 0:
            raise ValueError("aggregates must be non-negative")
        if min(self.high_plus, self.high_minus) < 0:
            raise ValueError("counts must be non-negative")
        if self.impl_flag not in (0, 1):
            raise ValueError("impl_flag must be 0 or 1")


def load_fewshots() -> list[dict]:
    text = resources.files("newsver.assets").joinpath("fewshots.json").read_text(encoding="utf-8")
    return json.loads(text)


def classify_stance(claim: Claim, doc: EvidenceDoc, config: PipelineConfig, providers: ProviderSet) -> Stance:
    """One classifier-stage call per document; malformed output reads NEUTRAL."""
    prompt = STANCE_PROMPT.format(claim=claim.text, title=doc.title, snippet=doc.snippet)
    response = providers.llm_complete(
        LlmRequest(
            stage="classifier", prompt=prompt, temperature=config.temperature("classifier")
        )
    )
    upper = response.upper()
    for stance in (Stance.SUPPORTING, Stance.CONTRADICTING, Stance.NEUTRAL):
        if stance.value in upper:
            return stance
    logger.warning("stance response unparseable, defaulting to NEUTRAL: %r", response[:80])
    return Stance.NEUTRAL


def implausibility_flag(news: NewsItem, config: PipelineConfig) -> int:
    """Deterministic sensationalism checks over the headline surface."""
    headline = news.headline
    letters = [c for c in headline if c.isalpha()]
    if letters and len(headline) > 20:
        upper_ratio = sum(1 for c in letters if c.isupper()) / len(letters)
        if upper_ratio > 0.6:
            return 1
    lowered = headline.lower()
    if any(pattern in lowered for pattern in config.clickbait_patterns):
        return 1
    if _EXCLAIM_RUN_RE.search(headline):
        return 1
    return 0


def aggregate_support(
    docs: list[EvidenceDoc], news: NewsItem, config: PipelineConfig
) -> SupportAggregate:
    """Reliability-weighted support/contradiction totals over stanced docs.

    Neutral documents are excluded entirely; an unstanced doc is a caller bug.
    """
    for doc in docs:
        if doc.stance is None:
            raise ValueError(f"document {doc.url} has no stance")

    supporting = [d for d in docs if d.stance == Stance.SUPPORTING]
    contradicting = [d for d in docs if d.stance == Stance.CONTRADICTING]
    return SupportAggregate(
        s_plus=sum(d.reliability for d in supporting),
        s_minus=sum(d.reliability for d in contradicting),
        high_plus=sum(1 for d in supporting if d.tier == Tier.HIGH),
        high_minus=sum(1 for d in contradicting if d.tier == Tier.HIGH),
        med_plus=sum(d.reliability for d in supporting if d.tier == Tier.MEDIUM),
        med_minus=sum(d.reliability for d in contradicting if d.tier == Tier.MEDIUM),
        low_only_support=bool(supporting) and all(d.tier == Tier.LOW for d in supporting),
        impl_flag=implausibility_flag(news, config),
    )


def preliminary_verdict(agg: SupportAggregate, config: PipelineConfig) -> Verdict:
    """Fixed-precedence decision rules over the support aggregate.

    Conflict detection first, then high-tier dominance, then the FAKE
    heuristics, then sparsity, then the medium-reliability margin.
    """
    if agg.high_plus > 0 and agg.high_minus > 0:
        return Verdict.UNCERTAIN
    if agg.high_plus > 0:
        return Verdict.REAL
    if agg.high_minus > 0:
        return Verdict.FAKE
    if agg.impl_flag == 1:
        return Verdict.FAKE
    if agg.low_only_support:
        return Verdict.FAKE
    if agg.s_plus + agg.s_minus < config.eta:
        return Verdict.UNCERTAIN
    if agg.med_plus - agg.med_minus >= config.gamma:
        return Verdict.REAL
    if agg.med_minus - agg.med_plus >= config.gamma:
        return Verdict.FAKE
    return Verdict.UNCERTAIN


def _render_fewshots(fewshots: list[dict]) -> str:
    blocks = []
    for shot in fewshots:
        blocks.append(
            f"Situation: {shot['situation']}\n"
            + json.dumps(
                {
                    "verdict": shot["verdict"],
                    "confidence": shot["confidence"],
                    "justification": shot["justification"],
                },
                ensure_ascii=False,
            )
        )
    return "\n\n".join(blocks)


def llm_pseudo_label(
    memory: Memory,
    fewshots: list[dict],
    preliminary: Verdict,
    agg: SupportAggregate,
    config: PipelineConfig,
    providers: ProviderSet,
    valid_ids: frozenset[str],
) -> tuple[Verdict, float, str, tuple[str, ...]]:
    """Constrained classifier query -> (verdict, confidence, justification, citations).

    One reparse retry; the documented fallback is UNCERTAIN with a
    margin-based confidence.
    """
    prompt = CLASSIFIER_PROMPT.format(
        fewshots=_render_fewshots(fewshots),
        memory=render_memory(memory),
        s_plus=agg.s_plus,
        s_minus=agg.s_minus,
        high_plus=agg.high_plus,
        high_minus=agg.high_minus,
        preliminary=preliminary.value,
    )
    request = LlmRequest(
        stage="classifier",
        prompt=prompt,
        temperature=config.temperature("classifier"),
        response_contract="structured_record",
    )
    for attempt in range(2):
        response = providers.llm_complete(request)
        try:
            record = parse_json_object(response)
            verdict = Verdict(str(record["verdict"]).strip().upper())
            confidence = min(1.0, max(0.0, float(record["confidence"])))
            justification = str(record["justification"]).strip()
        except (MalformedResponse, KeyError, TypeError, ValueError) as exc:
            logger.warning("classifier attempt %d unparseable: %s", attempt + 1, exc)
            request = LlmRequest(
                stage="classifier",
                prompt=prompt + "\n\nYour previous reply was not valid JSON. Reply with JSON only.",
                temperature=config.temperature("classifier"),
                response_contract="structured_record",
            )
            continue
        raw_citations = record.get("citations")
        if isinstance(raw_citations, list):
            cited = [str(c).strip().strip("[]") for c in raw_citations]
        else:
            cited = _CITATION_RE.findall(justification)
        citations = []
        for cid in cited:
            if cid in valid_ids:
                if cid not in citations:
                    citations.append(cid)
            else:
                logger.warning("dropping citation of unknown evidence id %r", cid)
        return verdict, confidence, justification, tuple(citations)

    total = agg.s_plus + agg.s_minus
    margin = abs(agg.s_plus - agg.s_minus) / total if total > 0 else 0.0
    return Verdict.UNCERTAIN, margin, FALLBACK_JUSTIFICATION, ()


def decide(
    news: NewsItem,
    obs: ObservationBundle,
    memory: Memory,
    config: PipelineConfig,
    providers: ProviderSet,
    taxonomy: PersuasionTaxonomy | None = None,
    fewshots: list[dict] | None = None,
    force_persuasion: bool = False,
) -> VerdictRecord:
    """Full decision stage over the final memory.

    Persuasion analysis runs exactly once, and only when the first-pass
    verdict is UNCERTAIN (or when forced by the persuasion-only variant).
    """
    fewshots = fewshots if fewshots is not None else load_fewshots()
    docs = list(obs.evidence.all_docs())
    stanced = [
        replace(doc, stance=classify_stance(obs.claim, doc, config, providers)) for doc in docs
    ]
    agg = aggregate_support(stanced, news, config)
    preliminary = preliminary_verdict(agg, config)
    valid_ids = obs.evidence.ids()

    pkm_invoked = False
    if force_persuasion and not config.disable_pkm:
        taxonomy = taxonomy or load_taxonomy()
        _, memory = run_persuasion_stage(
            obs.claim, obs.preprocessed_body, memory, taxonomy, config, providers
        )
        pkm_invoked = True

    verdict, confidence, justification, citations = llm_pseudo_label(
        memory, fewshots, preliminary, agg, config, providers, valid_ids
    )

    if verdict == Verdict.UNCERTAIN and not config.disable_pkm and not pkm_invoked:
        taxonomy = taxonomy or load_taxonomy()
        _, memory = run_persuasion_stage(
            obs.claim, obs.preprocessed_body, memory, taxonomy, config, providers
        )
        pkm_invoked = True
        verdict, confidence, justification, citations = llm_pseudo_label(
            memory, fewshots, preliminary, agg, config, providers, valid_ids
        )

    return VerdictRecord(
        item_id=news.id,
        verdict=verdict,
        confidence=_round_confidence(confidence),
        justification=justification,
        citations=citations,
        rule_verdict=preliminary,
        pkm_invoked=pkm_invoked,
        trace=memory,
        image_summary=obs.image_summary.text if obs.image_summary else "",
    )


def _round_confidence(score: float) -> int:
    """Half-up rounding of 100x the unit-interval confidence."""
    return int(math.floor(score * 100 + 0.5))


def render_output(record: VerdictRecord) -> str:
    """Canonical single-line JSON rendering with stable key order."""
    payload: dict = {
        "id": record.item_id,
        "verdict": record.verdict.value,
        "confidence": record.confidence,
        "justification": record.justification,
        "citations": list(record.citations),
        "rule_verdict": record.rule_verdict.value if record.rule_verdict else None,
        "pkm_invoked": record.pkm_invoked,
    }
    if record.image_summary:
        payload["image_summary"] = record.image_summary
    if record.trace.persuasion is not None:
        report = record.trace.persuasion
        payload["persuasion"] = {
            "activations": list(report.activations),
            "spans": [[i, s] for i, s in report.spans],
            "counts": list(report.category_counts),
            "index": report.index,
            "summary": report.summary,
        }
    payload["trace"] = {
        "entries": [
            {
                "round": e.round,
                "persona": e.persona.value,
                "question": e.question,
                "answer": e.answer,
                "insight": e.insight,
            }
            for e in record.trace.entries
        ],
        "insights": list(record.trace.insights),
        "evidence_digest": record.trace.evidence_digest,
    }
    return json.dumps(payload, ensure_ascii=False, separators=(",", ":"))


def parse_output(text: str) -> VerdictRecord:
    """Inverse of render_output."""
    payload = json.loads(text)
    persuasion = None
    if "persuasion" in payload:
        raw = payload["persuasion"]
        persuasion = PersuasionReport(
            activations=tuple(raw["activations"]),
            spans=tuple((int(i), s) for i, s in raw["spans"]),
            category_counts=tuple(raw["counts"]),
            index=raw["index"],
            summary=raw["summary"],
        )
    trace = payload["trace"]
    memory = Memory(
        entries=tuple(
            MemoryEntry(
                round=e["round"],
                persona=Persona(e["persona"]),
                question=e["question"],
                answer=e["answer"],
                insight=e["insight"],
            )
            for e in trace["entries"]
        ),
        insights=tuple(trace["insights"]),
        evidence_digest=trace["evidence_digest"],
        persuasion=persuasion,
    )
    return VerdictRecord(
        item_id=payload["id"],
        verdict=Verdict(payload["verdict"]),
        confidence=payload["confidence"],
        justification=payload["justification"],
        citations=tuple(payload["citations"]),
        rule_verdict=Verdict(payload["rule_verdict"]) if payload["rule_verdict"] else None,
        pkm_invoked=payload["pkm_invoked"],
        trace=memory,
        image_summary=payload.get("image_summary", ""),
    )
