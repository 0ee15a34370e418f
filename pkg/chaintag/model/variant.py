"""
Variant descriptors.

A variant is a context (which unary families are active) times a
potential form (linear B-matrices or feedforward nets), plus the encoder
and the embedding source.
"""

from dataclasses import dataclass
from typing import Dict, Tuple

from ..errors import ConfigError
from ..potentials.labels import LabelSet

CONTEXTS = ("chain", "local", "wide", "concat")
FORMS = ("linear", "nonlinear")
ENCODERS = ("identity", "bilstm")
EMBEDDING_SOURCES = ("table", "precomputed")

CONTEXT_ROLES: Dict[str, Tuple[str, ...]] = {
    "chain": ("eta",),
    "local": ("phi", "eta", "xi"),
    "wide": ("pi", "phi", "eta", "xi", "zeta"),
    "concat": ("sigma",),
}

VARIANTS: Dict[str, Tuple[str, str]] = {
    "crf": ("chain", "linear"),
    "crf-x": ("local", "linear"),
    "crf-o": ("chain", "nonlinear"),
    "crf-xo": ("local", "nonlinear"),
    "crf-xo-concat": ("concat", "nonlinear"),
    "crf-xo-wide": ("wide", "nonlinear"),
}


@dataclass
class ModelDims:
    embedding_dim: int
    lstm_hidden: int = 300
    potential_hidden: int = 600

    def __post_init__(self) -> None:
        for name in ("embedding_dim", "lstm_hidden", "potential_hidden"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be positive, got {getattr(self, name)}")


@dataclass
class VariantConfig:
    context: str
    form: str
    label_set: LabelSet
    encoder: str = "identity"
    embedding_source: str = "table"

    def __post_init__(self) -> None:
        for value, allowed, what in (
            (self.context, CONTEXTS, "context"),
            (self.form, FORMS, "potential form"),
            (self.encoder, ENCODERS, "encoder"),
            (self.embedding_source, EMBEDDING_SOURCES, "embedding source"),
        ):
            if value not in allowed:
                raise ConfigError(f"unknown {what} {value!r}; expected one of {', '.join(allowed)}")
        if self.context in ("wide", "concat") and self.form != "nonlinear":
            raise ConfigError(f"{self.context} context is defined for nonlinear potentials only")
        if len(self.label_set) < 1:
            raise ConfigError("a model needs at least one label")

    @classmethod
    def from_name(
        cls,
        name: str,
        label_set: LabelSet,
        encoder: str = "identity",
        embedding_source: str = "table",
    ) -> "VariantConfig":
        try:
            context, form = VARIANTS[name]
        except KeyError:
            raise ConfigError(
                f"unknown variant {name!r}; expected one of {', '.join(VARIANTS)}"
            ) from None
        return cls(context, form, label_set, encoder, embedding_source)

    @property
    def name(self) -> str:
        for name, pair in VARIANTS.items():
            if pair == (self.context, self.form):
                return name
        raise ConfigError(f"no named variant for {self.context}/{self.form}")

    @property
    def roles(self) -> Tuple[str, ...]:
        return CONTEXT_ROLES[self.context]


__all__ = [
    "CONTEXTS",
    "FORMS",
    "ENCODERS",
    "EMBEDDING_SOURCES",
    "CONTEXT_ROLES",
    "VARIANTS",
    "ModelDims",
    "VariantConfig",
]
