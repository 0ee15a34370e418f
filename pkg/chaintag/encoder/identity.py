"""Pass-through encoder: g_t = h_t."""

from typing import Dict

import numpy as np

from ..embeddings.table import EmbeddingSequence
from ..errors import CacheError, ShapeError
from .bilstm import EncodedSequence


class IdentityEncoder:
    kind = "identity"

    def __init__(self, input_dim: int):
        self.input_dim = input_dim

    @property
    def output_dim(self) -> int:
        return self.input_dim

    def after_init(self) -> None:
        pass

    def forward(self, h: EmbeddingSequence, training: bool = False) -> EncodedSequence:
        if h.dim != self.input_dim:
            raise ShapeError(f"encoder expects input dim {self.input_dim}, got {h.dim}")
        return EncodedSequence(h.vectors, cache=True if training else None)

    def backward(
        self, encoded: EncodedSequence, upstream: np.ndarray, grads: Dict[str, np.ndarray]
    ) -> np.ndarray:
        if encoded.cache is None:
            raise CacheError("identity backward needs a training-mode forward")
        return upstream
