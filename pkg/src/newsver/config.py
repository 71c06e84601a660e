"""Pipeline configuration: defaults, validation, and (de)serialization.

Config files are JSON documents whose keys mirror the field names below.
Unset fields take the documented defaults.
"""

import json
import math
from dataclasses import dataclass, field, replace
from pathlib import Path

from .errors import ConfigError
from .models import Persona

STAGES = ("claim", "kg", "persuasion", "question", "answer", "memory", "classifier")

DEFAULT_TEMPERATURES = {
    "claim": 0.30,
    "kg": 0.20,
    "persuasion": 0.30,
    "question": 0.70,
    "answer": 0.40,
    "memory": 0.50,
    "classifier": 0.25,
}

DEFAULT_PERSONA_ORDER = (
    Persona.SUPERVISOR,
    Persona.JOURNALIST,
    Persona.LEGAL,
    Persona.SCIENTIFIC,
)

DEFAULT_CLICKBAIT_PATTERNS = (
    "you won't believe",
    "you wont believe",
    "doctors hate",
    "what happened next",
    "this one trick",
    "will shock you",
    "number one reason",
)

VARIANTS = ("full", "evidence-only", "agentic-only", "pkm-only")


@dataclass(frozen=True)
class PipelineConfig:
    """Validated hyperparameters for one pipeline run."""

    k1: int = 15
    k2: int = 15
    k1p: int = 10
    k2p: int = 10
    k3: int = 10
    tau: int = 4
    lam: tuple[float, float, float, float] = (0.25, 0.25, 0.25, 0.25)
    alpha_h: float = 0.9
    alpha_m: float = 0.7
    alpha_u: float = 0.5
    alpha_l: float = 0.3
    alpha_t: float = 0.2
    gamma: float = 0.1
    eta: float = 0.5
    beta: tuple[float, ...] = (1.0, 1.0, 1.0, 1.0, 1.0, 1.0)
    temperatures: dict = field(default_factory=lambda: dict(DEFAULT_TEMPERATURES))
    persona_order: tuple[Persona, ...] = DEFAULT_PERSONA_ORDER
    disable_pkm: bool = False
    disable_image: bool = False
    disable_kg: bool = False
    single_persona: bool = False
    dedup_domains: bool = True
    clickbait_patterns: tuple[str, ...] = DEFAULT_CLICKBAIT_PATTERNS
    variant: str = "full"

    def credibility_weight(self, rating) -> float:
        """Map a source rating to its credibility score."""
        return {
            "High": self.alpha_h,
            "Medium": self.alpha_m,
            "Unknown": self.alpha_u,
            "Low": self.alpha_l,
        }[str(getattr(rating, "value", rating))]

    def active_personas(self) -> tuple[Persona, ...]:
        if self.single_persona:
            return (self.persona_order[0],)
        return self.persona_order

    def temperature(self, stage: str) -> float:
        return self.temperatures[stage]


_TUPLE_FIELDS = {"lam", "beta", "persona_order", "clickbait_patterns"}


def validate_config(raw: dict) -> PipelineConfig:
    """Build a PipelineConfig from a parsed document, rejecting invariant violations."""
    if not isinstance(raw, dict):
        raise ConfigError("configuration document must be a JSON object")

    known = set(PipelineConfig.__dataclass_fields__)
    unknown = set(raw) - known - {"lambda"}
    if unknown:
        raise ConfigError(f"unknown configuration field(s): {sorted(unknown)}")

    kwargs = {}
    for key, value in raw.items():
        key = "lam" if key == "lambda" else key
        if key == "persona_order":
            try:
                value = tuple(Persona(p) for p in value)
            except ValueError as exc:
                raise ConfigError(f"persona_order: {exc}") from exc
        elif key == "temperatures":
            if not isinstance(value, dict):
                raise ConfigError("temperatures must be a map")
            merged = dict(DEFAULT_TEMPERATURES)
            merged.update(value)
            value = merged
        elif key in _TUPLE_FIELDS:
            value = tuple(value)
        kwargs[key] = value

    config = PipelineConfig(**kwargs)
    _check(config)
    return config


def _check(config: PipelineConfig) -> None:
    if len(config.lam) != 4:
        raise ConfigError("lambda must have exactly 4 weights")
    if abs(sum(config.lam) - 1.0) > 1e-9:
        raise ConfigError(f"lambda must sum to 1 (got {sum(config.lam)})")
    if any(w < 0 for w in config.lam):
        raise ConfigError("lambda weights must be non-negative")

    alphas = (config.alpha_h, config.alpha_m, config.alpha_u, config.alpha_l)
    if not all(0.0 <= a <= 1.0 for a in alphas):
        raise ConfigError("alpha weights must lie in [0, 1]")
    if not (config.alpha_h > config.alpha_m > config.alpha_u > config.alpha_l):
        raise ConfigError("alpha ordering violated: require alpha_h > alpha_m > alpha_u > alpha_l")
    if not 0.0 <= config.alpha_t <= 1.0:
        raise ConfigError("alpha_t must lie in [0, 1]")

    for name in ("k1", "k2", "k1p", "k2p", "k3"):
        if getattr(config, name) < 1:
            raise ConfigError(f"{name} must be >= 1")
    if config.tau < 1:
        raise ConfigError("tau must be >= 1")
    if config.gamma <= 0:
        raise ConfigError("gamma must be > 0")
    if config.eta <= 0:
        raise ConfigError("eta must be > 0")

    if len(config.beta) != 6:
        raise ConfigError("beta must have exactly 6 category importances")
    if any(b <= 0 for b in config.beta):
        raise ConfigError("beta importances must be > 0")

    extra_stages = set(config.temperatures) - set(STAGES)
    if extra_stages:
        raise ConfigError(f"unknown temperature stage(s): {sorted(extra_stages)}")
    missing = set(STAGES) - set(config.temperatures)
    if missing:
        raise ConfigError(f"missing temperature stage(s): {sorted(missing)}")
    for stage, temp in config.temperatures.items():
        if not 0.0 <= temp <= 2.0 or math.isnan(temp):
            raise ConfigError(f"temperature for stage {stage} must lie in [0, 2]")

    if not config.persona_order:
        raise ConfigError("persona_order must be non-empty")
    if len(set(config.persona_order)) != len(config.persona_order):
        raise ConfigError("persona_order must not repeat personas")

    if config.variant not in VARIANTS:
        raise ConfigError(f"variant must be one of {VARIANTS}")


def config_to_dict(config: PipelineConfig) -> dict:
    """Plain-JSON form; round-trips through validate_config."""
    return {
        "k1": config.k1,
        "k2": config.k2,
        "k1p": config.k1p,
        "k2p": config.k2p,
        "k3": config.k3,
        "tau": config.tau,
        "lambda": list(config.lam),
        "alpha_h": config.alpha_h,
        "alpha_m": config.alpha_m,
        "alpha_u": config.alpha_u,
        "alpha_l": config.alpha_l,
        "alpha_t": config.alpha_t,
        "gamma": config.gamma,
        "eta": config.eta,
        "beta": list(config.beta),
        "temperatures": dict(config.temperatures),
        "persona_order": [p.value for p in config.persona_order],
        "disable_pkm": config.disable_pkm,
        "disable_image": config.disable_image,
        "disable_kg": config.disable_kg,
        "single_persona": config.single_persona,
        "dedup_domains": config.dedup_domains,
        "clickbait_patterns": list(config.clickbait_patterns),
        "variant": config.variant,
    }


def load_config(path: str | Path) -> PipelineConfig:
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read configuration file {path}: {exc}") from exc
    return validate_config(raw)


def with_overrides(config: PipelineConfig, **overrides) -> PipelineConfig:
    """Apply CLI-level overrides and re-validate."""
    updated = replace(config, **overrides)
    _check(updated)
    return updated
