"""Multi-persona questioning loop over shared memory.

Each round, every active persona asks one probing question, the answering
agent replies from the observation bundle and memory, and the exchange is
synthesized into the memory. Questions are deduplicated by normalized form.
"""

import logging
from dataclasses import dataclass
from importlib import resources

from .config import PipelineConfig
from .errors import MalformedResponse, ProviderUnavailable
from .models import (
    EvidenceBundle,
    Memory,
    MemoryEntry,
    ObservationBundle,
    Persona,
)
from .providers.base import LlmRequest, ProviderSet
from .textutil import normalize_question, split_sentences, truncate_sentences

logger = logging.getLogger(__name__)

MAX_ANSWER_SENTENCES = 4

PERSONA_GOALS = {
    Persona.SUPERVISOR: "determine overall claim veracity",
    Persona.JOURNALIST: "probe credibility, bias, and contextual consistency",
    Persona.LEGAL: "check regulatory or legal compliance",
    Persona.SCIENTIFIC: "validate factual and scientific correctness",
}

INSIGHT_PROMPT = """Condense the question/answer exchange below into ONE short insight sentence \
for the verification memory.

Question: {question}
Answer: {answer}

Insight:"""


@dataclass(frozen=True)
class PersonaSpec:
    """Questioning persona: role name, goal, and its prompt template."""

    name: Persona
    goal_text: str
    prompt_template: str


@dataclass(frozen=True)
class AnsweringSpec:
    """Answering agent constraints: cite items, stay short, admit gaps."""

    prompt_template: str


def _asset_text(name: str) -> str:
    return resources.files("newsver.assets").joinpath(name).read_text(encoding="utf-8")


def load_persona(name: Persona) -> PersonaSpec:
    template = _asset_text(f"personas/{name.value.lower()}.txt")
    return PersonaSpec(name=name, goal_text=PERSONA_GOALS[name], prompt_template=template)


def load_personas(order: tuple[Persona, ...]) -> tuple[PersonaSpec, ...]:
    return tuple(load_persona(name) for name in order)


def load_answering_spec() -> AnsweringSpec:
    return AnsweringSpec(prompt_template=_asset_text("answering.txt"))


def render_evidence_digest(bundle: EvidenceBundle) -> str:
    """Deterministic textual rendering of the bundle for the memory."""
    if bundle.empty:
        return "no external evidence retrieved"
    lines = []
    for doc in bundle.all_docs():
        stance = doc.stance.value if doc.stance is not None else "pending"
        lines.append(
            f"[{doc.eid}] {doc.title} | {doc.domain} | reliability={doc.reliability:.4f} "
            f"| tier={doc.tier.value} | stance={stance}"
        )
    for triplet in bundle.kg:
        lines.append(
            f"[{triplet.eid}] {triplet.subject} --{triplet.relation}--> {triplet.obj} "
            f"(source: {triplet.source})"
        )
    return "\n".join(lines)


def render_observation(obs: ObservationBundle) -> str:
    parts = [
        f"Headline: {obs.headline}",
        f"Claim: {obs.claim.text}",
    ]
    if obs.claim.entities:
        parts.append(f"Claim entities: {', '.join(obs.claim.entities)}")
    if obs.image_summary is not None:
        parts.append(f"Image summary: {obs.image_summary.text}")
    parts.append(f"Body: {obs.preprocessed_body}")
    parts.append("Evidence:\n" + render_evidence_digest(obs.evidence))
    return "\n".join(parts)


def render_memory(memory: Memory) -> str:
    """Deterministic rendering of memory for prompts and the classifier."""
    lines = ["Evidence digest:", memory.evidence_digest or "(none)"]
    if memory.entries:
        lines.append("Question/answer history:")
        for entry in memory.entries:
            lines.append(f"- round {entry.round} [{entry.persona.value}] Q: {entry.question}")
            lines.append(f"  A: {entry.answer}")
            lines.append(f"  insight: {entry.insight}")
    else:
        lines.append("Question/answer history: (empty)")
    if memory.insights:
        lines.append("Additional insights:")
        lines.extend(f"- {text}" for text in memory.insights)
    if memory.persuasion is not None:
        lines.append(f"Persuasion analysis: {memory.persuasion.summary}")
    return "\n".join(lines)


def init_memory(obs: ObservationBundle) -> Memory:
    return Memory(entries=(), insights=(), evidence_digest=render_evidence_digest(obs.evidence))


def _question_prompt(persona: PersonaSpec, obs: ObservationBundle, memory: Memory) -> str:
    prior = memory.questions()
    return persona.prompt_template.format(
        goal=persona.goal_text,
        observation=render_observation(obs),
        memory=render_memory(memory),
        asked_count=len(prior),
        prior_questions="\n".join(f"- {q}" for q in prior) if prior else "(none)",
    )


def generate_question(
    persona: PersonaSpec,
    obs: ObservationBundle,
    memory: Memory,
    config: PipelineConfig,
    providers: ProviderSet,
) -> str:
    """One fresh probing question; retries once on a duplicate, then falls back."""
    seen = {normalize_question(q) for q in memory.questions()}
    prompt = _question_prompt(persona, obs, memory)
    question = providers.llm_complete(
        LlmRequest(stage="question", prompt=prompt, temperature=config.temperature("question"))
    ).strip()
    if question and normalize_question(question) not in seen:
        return question

    retry_prompt = (
        prompt
        + f"\n\nThe question {question!r} was already asked. Ask a different, non-redundant question."
    )
    retry = providers.llm_complete(
        LlmRequest(stage="question", prompt=retry_prompt, temperature=config.temperature("question"))
    ).strip()
    if retry and normalize_question(retry) not in seen:
        return retry

    fallback = (
        f"What remains unverified about this claim from a {persona.name.value.lower()} standpoint?"
    )
    if normalize_question(fallback) in seen:
        fallback = f"{fallback[:-1]} (round {len(memory.entries) + 1})?"
    logger.warning("question generation fell back for persona %s", persona.name.value)
    return fallback


def answer_question(
    question: str,
    obs: ObservationBundle,
    memory: Memory,
    config: PipelineConfig,
    providers: ProviderSet,
    answering: AnsweringSpec | None = None,
) -> str:
    """Evidence-grounded answer, hard-capped at four sentences."""
    if not question.strip():
        raise ValueError("question must be non-empty")
    spec = answering or load_answering_spec()
    prompt = spec.prompt_template.format(
        observation=render_observation(obs),
        memory=render_memory(memory),
        question=question,
    )
    answer = providers.llm_complete(
        LlmRequest(stage="answer", prompt=prompt, temperature=config.temperature("answer"))
    ).strip()
    return truncate_sentences(answer, MAX_ANSWER_SENTENCES)


def update_memory(
    memory: Memory,
    question: str,
    answer: str,
    round_no: int,
    persona: Persona,
    config: PipelineConfig,
    providers: ProviderSet,
) -> Memory:
    """Append the exchange with a one-sentence synthesized insight."""
    if not question.strip() or not answer.strip():
        raise ValueError("question and answer must be non-empty")
    try:
        insight = providers.llm_complete(
            LlmRequest(
                stage="memory",
                prompt=INSIGHT_PROMPT.format(question=question, answer=answer),
                temperature=config.temperature("memory"),
            )
        ).strip()
        insight = truncate_sentences(insight, 1)
        if not insight:
            raise MalformedResponse("empty insight")
    except (ProviderUnavailable, MalformedResponse) as exc:
        logger.warning("insight synthesis degraded to answer head: %s", exc)
        sentences = split_sentences(answer)
        insight = sentences[0] if sentences else answer
    entry = MemoryEntry(
        round=round_no, persona=persona, question=question, answer=answer, insight=insight
    )
    return memory.with_entry(entry)


def run_rounds(obs: ObservationBundle, config: PipelineConfig, providers: ProviderSet) -> Memory:
    """The full questioning loop: tau rounds over the active personas."""
    personas = load_personas(config.active_personas())
    answering = load_answering_spec()
    memory = init_memory(obs)
    for round_no in range(1, config.tau + 1):
        for persona in personas:
            question = generate_question(persona, obs, memory, config, providers)
            answer = answer_question(question, obs, memory, config, providers, answering)
            memory = update_memory(
                memory, question, answer, round_no, persona.name, config, providers
            )
    return memory
