"""
Bidirectional LSTM encoder with hand-written backpropagation through time.

Gates per direction (x_t input, h/c the previous hidden and cell state)::

    i = sigmoid(W_i x + U_i h + b_i)      f = sigmoid(W_f x + U_f h + b_f)
    c~ = tanh(W_c x + U_c h + b_c)        o = sigmoid(W_o x + U_o h + b_o)
    c' = f * c + i * c~                   h' = o * tanh(c')

Initial hidden and cell states are zero; g_t = [forward h_t ; backward h_t].
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np
from scipy.special import expit

from ..embeddings.table import EmbeddingSequence
from ..errors import CacheError, ShapeError
from ..numerics.params import Parameter, ParameterStore

logger = logging.getLogger(__name__)

GATES = ("i", "f", "c", "o")
DIRECTIONS = ("fwd", "bwd")
FORGET_BIAS = 1.0


@dataclass
class _DirectionCache:
    x: np.ndarray
    h_prev: np.ndarray
    c_prev: np.ndarray
    gates: Dict[str, np.ndarray]
    tanh_c: np.ndarray
    order: List[int]


@dataclass
class EncodedSequence:
    """States g_1..g_T; ``cache`` is set only by a training-mode forward."""

    vectors: np.ndarray
    cache: Optional[object] = field(default=None, repr=False)

    @property
    def length(self) -> int:
        return int(self.vectors.shape[0])

    @property
    def dim(self) -> int:
        return int(self.vectors.shape[1])


@dataclass
class BiLstmParams:
    input_dim: int
    hidden_dim: int
    entries: Dict[str, Parameter]
    prefix: str = "encoder"

    @classmethod
    def register(
        cls, store: ParameterStore, input_dim: int, hidden_dim: int, prefix: str = "encoder"
    ) -> "BiLstmParams":
        if input_dim < 1 or hidden_dim < 1:
            raise ShapeError(f"bad biLSTM dims input={input_dim} hidden={hidden_dim}")
        entries = {}
        for direction in DIRECTIONS:
            for gate in GATES:
                for kind, shape, init in (
                    ("W", (hidden_dim, input_dim), "uniform"),
                    ("U", (hidden_dim, hidden_dim), "uniform"),
                    ("b", (1, hidden_dim), "zeros"),
                ):
                    name = f"{prefix}.{direction}.{kind}_{gate}"
                    entries[name] = store.register(name, shape, init=init)
        return cls(input_dim, hidden_dim, entries, prefix)

    def name(self, direction: str, kind: str, gate: str) -> str:
        return f"{self.prefix}.{direction}.{kind}_{gate}"

    def get(self, direction: str, kind: str, gate: str) -> np.ndarray:
        return self.entries[self.name(direction, kind, gate)].value

    def set_forget_bias(self, value: float = FORGET_BIAS) -> None:
        for direction in DIRECTIONS:
            self.get(direction, "b", "f").fill(value)

    @property
    def output_dim(self) -> int:
        return 2 * self.hidden_dim

    def zero_gradients(self) -> Dict[str, np.ndarray]:
        return {name: np.zeros_like(p.value) for name, p in self.entries.items()}


def _run_direction(params: BiLstmParams, direction: str, x: np.ndarray) -> Tuple[np.ndarray, _DirectionCache]:
    T, H = x.shape[0], params.hidden_dim
    order = list(range(T)) if direction == "fwd" else list(range(T - 1, -1, -1))
    W = {g: params.get(direction, "W", g) for g in GATES}
    U = {g: params.get(direction, "U", g) for g in GATES}
    b = {g: params.get(direction, "b", g)[0] for g in GATES}

    out = np.zeros((T, H))
    h_prev = np.zeros((T, H))
    c_prev = np.zeros((T, H))
    gates = {g: np.zeros((T, H)) for g in GATES}
    tanh_c = np.zeros((T, H))

    h = np.zeros(H)
    c = np.zeros(H)
    for t in order:
        h_prev[t], c_prev[t] = h, c
        pre = {g: W[g] @ x[t] + U[g] @ h + b[g] for g in GATES}
        gates["i"][t] = expit(pre["i"])
        gates["f"][t] = expit(pre["f"])
        gates["c"][t] = np.tanh(pre["c"])
        gates["o"][t] = expit(pre["o"])
        c = gates["f"][t] * c + gates["i"][t] * gates["c"][t]
        tanh_c[t] = np.tanh(c)
        h = gates["o"][t] * tanh_c[t]
        out[t] = h
    return out, _DirectionCache(x, h_prev, c_prev, gates, tanh_c, order)


def bilstm_forward(params: BiLstmParams, h: EmbeddingSequence, training: bool = False) -> EncodedSequence:
    x = h.vectors
    if x.shape[1] != params.input_dim:
        raise ShapeError(f"biLSTM expects input dim {params.input_dim}, got {x.shape[1]}")
    fwd, fwd_cache = _run_direction(params, "fwd", x)
    bwd, bwd_cache = _run_direction(params, "bwd", x)
    cache = {"fwd": fwd_cache, "bwd": bwd_cache} if training else None
    return EncodedSequence(np.hstack([fwd, bwd]), cache)


def _backprop_direction(
    params: BiLstmParams,
    direction: str,
    cache: _DirectionCache,
    upstream: np.ndarray,
    grads: Dict[str, np.ndarray],
    dx: np.ndarray,
) -> None:
    H = params.hidden_dim
    W = {g: params.get(direction, "W", g) for g in GATES}
    U = {g: params.get(direction, "U", g) for g in GATES}
    dh_next = np.zeros(H)
    dc_next = np.zeros(H)
    for t in reversed(cache.order):
        i, f, g, o = (cache.gates[k][t] for k in GATES)
        tc = cache.tanh_c[t]
        dh = upstream[t] + dh_next
        dc = dh * o * (1.0 - tc * tc) + dc_next
        d_pre = {
            "i": dc * g * i * (1.0 - i),
            "f": dc * cache.c_prev[t] * f * (1.0 - f),
            "c": dc * i * (1.0 - g * g),
            "o": dh * tc * o * (1.0 - o),
        }
        dc_next = dc * f
        dh_next = np.zeros(H)
        for gate in GATES:
            d = d_pre[gate]
            grads[params.name(direction, "W", gate)] += np.outer(d, cache.x[t])
            grads[params.name(direction, "U", gate)] += np.outer(d, cache.h_prev[t])
            grads[params.name(direction, "b", gate)][0] += d
            dx[t] += W[gate].T @ d
            dh_next += U[gate].T @ d


def bilstm_backward(
    params: BiLstmParams,
    encoded: EncodedSequence,
    upstream: np.ndarray,
    grads: Optional[Dict[str, np.ndarray]] = None,
) -> Tuple[Dict[str, np.ndarray], np.ndarray]:
    """Accumulate parameter gradients into ``grads``; returns (grads, dL/dh)."""
    if encoded.cache is None:
        raise CacheError("bilstm_backward needs a forward pass run with training=True")
    if upstream.shape != encoded.vectors.shape:
        raise ShapeError(f"upstream shape {upstream.shape} != states {encoded.vectors.shape}")
    if grads is None:
        grads = params.zero_gradients()
    caches = encoded.cache
    assert isinstance(caches, dict)
    H = params.hidden_dim
    dx = np.zeros_like(caches["fwd"].x)
    _backprop_direction(params, "fwd", caches["fwd"], upstream[:, :H], grads, dx)
    _backprop_direction(params, "bwd", caches["bwd"], upstream[:, H:], grads, dx)
    return grads, dx


class BiLstmEncoder:
    """Encoder wrapper over :class:`BiLstmParams` registered in a store."""

    kind = "bilstm"

    def __init__(self, store: ParameterStore, input_dim: int, hidden_dim: int):
        self.params = BiLstmParams.register(store, input_dim, hidden_dim)
        self.input_dim = input_dim

    @property
    def output_dim(self) -> int:
        return self.params.output_dim

    def after_init(self) -> None:
        self.params.set_forget_bias()
        logger.debug("biLSTM forget-gate biases set to %.1f", FORGET_BIAS)

    def forward(self, h: EmbeddingSequence, training: bool = False) -> EncodedSequence:
        return bilstm_forward(self.params, h, training)

    def backward(
        self, encoded: EncodedSequence, upstream: np.ndarray, grads: Dict[str, np.ndarray]
    ) -> np.ndarray:
        _, dh = bilstm_backward(self.params, encoded, upstream, grads)
        return dh


__all__ = [
    "GATES",
    "DIRECTIONS",
    "FORGET_BIAS",
    "EncodedSequence",
    "BiLstmParams",
    "bilstm_forward",
    "bilstm_backward",
    "BiLstmEncoder",
]
