"""
SGD with Nesterov momentum, in lookahead form:

    v <- mu * v - lr * grad L(theta + mu * v)
    theta <- theta + v
"""

import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, Optional

import numpy as np

from ..errors import ConfigError, NonFiniteGradientError
from ..numerics.params import ParameterStore

logger = logging.getLogger(__name__)

DEFAULT_LEARNING_RATE = 0.001
DEFAULT_MOMENTUM = 0.9

GradFn = Callable[[ParameterStore], float]


@dataclass
class OptimizerState:
    learning_rate: float = DEFAULT_LEARNING_RATE
    momentum: float = DEFAULT_MOMENTUM
    clip_norm: Optional[float] = None
    weight_decay: float = 0.0
    velocity: Dict[str, np.ndarray] = field(default_factory=dict)
    steps: int = 0

    def __post_init__(self) -> None:
        if not 0.0 <= self.momentum < 1.0:
            raise ConfigError(f"momentum must be in [0, 1), got {self.momentum}")
        if self.learning_rate <= 0.0:
            raise ConfigError(f"learning rate must be positive, got {self.learning_rate}")
        if self.clip_norm is not None and self.clip_norm <= 0.0:
            raise ConfigError(f"clip norm must be positive, got {self.clip_norm}")
        if self.weight_decay < 0.0:
            raise ConfigError(f"weight decay must be non-negative, got {self.weight_decay}")


def nesterov_step(store: ParameterStore, state: OptimizerState, grad_fn: GradFn) -> float:
    """One update; ``grad_fn`` fills the store's gradients at the lookahead point.

    Returns whatever loss ``grad_fn`` reports. Frozen entries are left alone.
    """
    trainable = [p for p in store if p.trainable]
    for p in trainable:
        if p.name not in state.velocity:
            state.velocity[p.name] = np.zeros_like(p.value)

    originals = {p.name: p.value.copy() for p in trainable}
    mu = state.momentum
    for p in trainable:
        p.value += mu * state.velocity[p.name]

    store.zero_grad()
    try:
        loss = grad_fn(store)
        for p in trainable:
            if not np.all(np.isfinite(p.grad)):
                raise NonFiniteGradientError(p.name)
    except Exception:
        for p in trainable:
            p.value[...] = originals[p.name]
        raise

    if state.weight_decay:
        for p in trainable:
            p.grad += state.weight_decay * p.value
    if state.clip_norm is not None:
        norm = float(np.sqrt(sum(float(np.sum(p.grad * p.grad)) for p in trainable)))
        if norm > state.clip_norm:
            scale = state.clip_norm / norm
            for p in trainable:
                p.grad *= scale
            logger.debug("clipped gradient norm %.4g to %.4g", norm, state.clip_norm)

    lr = state.learning_rate
    for p in trainable:
        v = state.velocity[p.name]
        v *= mu
        v -= lr * p.grad
        p.value[...] = originals[p.name] + v
    state.steps += 1
    return loss


__all__ = [
    "DEFAULT_LEARNING_RATE",
    "DEFAULT_MOMENTUM",
    "GradFn",
    "OptimizerState",
    "nesterov_step",
]
