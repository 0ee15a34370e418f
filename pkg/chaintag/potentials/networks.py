"""
Unary potential functions.

``PotentialNet`` is the nonlinear form: two ReLU layers whose outputs are
summed (skip connection) before a linear output layer of width |labels|.
``LinearEmission`` is the linear form ``B . v``. Both work on stacked rows
so one call covers every position of a sentence.
"""

import logging
from dataclasses import dataclass
from typing import Dict, Optional

import numpy as np

from ..errors import CacheError, ShapeError
from ..numerics.ops import Rng, matvec
from ..numerics.params import ParameterStore

logger = logging.getLogger(__name__)

DEFAULT_HIDDEN = 600

# role -> position offset of the consumed state; sigma reads the whole window
ROLE_OFFSETS: Dict[str, int] = {"pi": -2, "phi": -1, "eta": 0, "xi": 1, "zeta": 2}
ROLES = ("pi", "phi", "eta", "xi", "zeta", "sigma")


def _check_role(role: str) -> None:
    if role not in ROLES:
        raise ValueError(f"unknown potential role {role!r}")


@dataclass
class NetCache:
    inputs: np.ndarray
    pre1: np.ndarray
    pre2: np.ndarray
    hidden: np.ndarray
    mask: Optional[np.ndarray]


class PotentialNet:
    """Feedforward potential for one role; weights live in the store."""

    form = "nonlinear"

    def __init__(
        self,
        store: ParameterStore,
        role: str,
        input_dim: int,
        n_labels: int,
        hidden: int = DEFAULT_HIDDEN,
        dropout: float = 0.0,
        prefix: str = "potentials",
    ):
        _check_role(role)
        if not 0.0 <= dropout < 1.0:
            raise ValueError(f"dropout must be in [0, 1), got {dropout}")
        self.role = role
        self.input_dim = input_dim
        self.n_labels = n_labels
        self.hidden = hidden
        self.dropout = dropout
        base = f"{prefix}.{role}"
        self.names = {
            "W1": f"{base}.W1",
            "b1": f"{base}.b1",
            "W2": f"{base}.W2",
            "b2": f"{base}.b2",
            "W3": f"{base}.W3",
            "b3": f"{base}.b3",
        }
        self.W1 = store.register(self.names["W1"], (hidden, input_dim))
        self.b1 = store.register(self.names["b1"], (1, hidden), init="zeros")
        self.W2 = store.register(self.names["W2"], (hidden, hidden))
        self.b2 = store.register(self.names["b2"], (1, hidden), init="zeros")
        self.W3 = store.register(self.names["W3"], (n_labels, hidden))
        self.b3 = store.register(self.names["b3"], (1, n_labels), init="zeros")

    def forward(
        self, inputs: np.ndarray, training: bool = False, rng: Optional[Rng] = None
    ):
        """Rows of ``inputs`` to rows of log-potentials; returns (out, cache or None)."""
        if inputs.ndim != 2 or inputs.shape[1] != self.input_dim:
            raise ShapeError(f"{self.role} net expects rows of dim {self.input_dim}, got {inputs.shape}")
        pre1 = inputs @ self.W1.value.T + self.b1.value
        u1 = np.maximum(pre1, 0.0)
        pre2 = u1 @ self.W2.value.T + self.b2.value
        hidden = u1 + np.maximum(pre2, 0.0)
        mask = None
        if training and self.dropout > 0.0 and rng is not None:
            keep = 1.0 - self.dropout
            mask = (rng.random(hidden.shape) < keep) / keep
            hidden = hidden * mask
        out = hidden @ self.W3.value.T + self.b3.value
        cache = NetCache(inputs, pre1, pre2, hidden, mask) if training else None
        return out, cache

    def backward(
        self, cache: Optional[NetCache], upstream: np.ndarray, grads: Dict[str, np.ndarray]
    ) -> np.ndarray:
        if cache is None:
            raise CacheError(f"{self.role} net backward needs a training-mode forward")
        n = self.names
        grads[n["W3"]] += upstream.T @ cache.hidden
        grads[n["b3"]][0] += upstream.sum(axis=0)
        d_hidden = upstream @ self.W3.value
        if cache.mask is not None:
            d_hidden = d_hidden * cache.mask
        d_pre2 = d_hidden * (cache.pre2 > 0.0)
        u1 = np.maximum(cache.pre1, 0.0)
        grads[n["W2"]] += d_pre2.T @ u1
        grads[n["b2"]][0] += d_pre2.sum(axis=0)
        d_u1 = d_hidden + d_pre2 @ self.W2.value
        d_pre1 = d_u1 * (cache.pre1 > 0.0)
        grads[n["W1"]] += d_pre1.T @ cache.inputs
        grads[n["b1"]][0] += d_pre1.sum(axis=0)
        return d_pre1 @ self.W1.value


class LinearEmission:
    """``log potential = B . v`` with one matrix per role and no bias."""

    form = "linear"

    def __init__(
        self, store: ParameterStore, role: str, input_dim: int, n_labels: int, prefix: str = "potentials"
    ):
        _check_role(role)
        self.role = role
        self.input_dim = input_dim
        self.n_labels = n_labels
        self.name = f"{prefix}.{role}.B"
        self.B = store.register(self.name, (n_labels, input_dim))

    def forward(self, inputs: np.ndarray, training: bool = False, rng: Optional[Rng] = None):
        if inputs.ndim != 2 or inputs.shape[1] != self.input_dim:
            raise ShapeError(f"{self.role} emission expects rows of dim {self.input_dim}, got {inputs.shape}")
        return inputs @ self.B.value.T, (inputs if training else None)

    def backward(
        self, cache: Optional[np.ndarray], upstream: np.ndarray, grads: Dict[str, np.ndarray]
    ) -> np.ndarray:
        if cache is None:
            raise CacheError(f"{self.role} emission backward needs a training-mode forward")
        grads[self.name] += upstream.T @ cache
        return upstream @ self.B.value


def mlp_forward(net: PotentialNet, v: np.ndarray, training: bool = False) -> np.ndarray:
    """Single-vector evaluation of a potential net."""
    vec = np.asarray(v, dtype=np.float64)
    if vec.ndim != 1:
        raise ShapeError(f"mlp_forward takes a vector, got shape {vec.shape}")
    out, _ = net.forward(vec[None, :], training)
    return out[0]


def linear_emission(B: np.ndarray, v: np.ndarray) -> np.ndarray:
    return matvec(B, v)


__all__ = [
    "DEFAULT_HIDDEN",
    "ROLES",
    "ROLE_OFFSETS",
    "NetCache",
    "PotentialNet",
    "LinearEmission",
    "mlp_forward",
    "linear_emission",
]
