"""
Model package: variant descriptors and assembled taggers.
"""

from .model import (
    EMBEDDINGS,
    Model,
    build,
    decode,
    decode_corpus,
    dumps_store,
    load_model,
    nll,
    save_model,
    sentence_nll_grad,
    zero_context_potentials,
)
from .variant import (
    CONTEXT_ROLES,
    CONTEXTS,
    EMBEDDING_SOURCES,
    ENCODERS,
    FORMS,
    VARIANTS,
    ModelDims,
    VariantConfig,
)

__all__ = [
    "CONTEXTS",
    "FORMS",
    "ENCODERS",
    "EMBEDDING_SOURCES",
    "CONTEXT_ROLES",
    "VARIANTS",
    "ModelDims",
    "VariantConfig",
    "EMBEDDINGS",
    "Model",
    "build",
    "sentence_nll_grad",
    "nll",
    "decode",
    "decode_corpus",
    "zero_context_potentials",
    "save_model",
    "load_model",
    "dumps_store",
]
