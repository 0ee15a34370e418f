"""
Named parameters with paired gradient accumulators.
"""

import logging
from collections import OrderedDict
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Tuple

import numpy as np

from ..errors import ShapeError
from .ops import Rng, uniform_bound

logger = logging.getLogger(__name__)

INIT_RULES = ("uniform", "zeros", "keep")


@dataclass
class Parameter:
    """One dense matrix and its gradient of identical shape."""

    name: str
    value: np.ndarray
    grad: np.ndarray
    init: str = "uniform"
    trainable: bool = True

    @property
    def shape(self) -> Tuple[int, int]:
        return (int(self.value.shape[0]), int(self.value.shape[1]))


class ParameterStore:
    """Ordered registry of model parameters.

    Iteration order is registration order, which makes parameter
    initialization and every reduction over parameters reproducible.
    Vectors (biases) are stored as 1 x n matrices.
    """

    def __init__(self) -> None:
        self._entries: "OrderedDict[str, Parameter]" = OrderedDict()

    def register(
        self,
        name: str,
        shape: Tuple[int, int],
        init: str = "uniform",
        trainable: bool = True,
        value: Optional[np.ndarray] = None,
    ) -> Parameter:
        if name in self._entries:
            raise ValueError(f"parameter {name!r} registered twice")
        if init not in INIT_RULES:
            raise ValueError(f"unknown init rule {init!r}")
        rows, cols = int(shape[0]), int(shape[1])
        if value is None:
            data = np.zeros((rows, cols), dtype=np.float64)
        else:
            data = np.array(value, dtype=np.float64, order="C")
            if data.shape != (rows, cols):
                raise ShapeError(f"{name}: value shape {data.shape} != {(rows, cols)}")
        param = Parameter(
            name=name,
            value=data,
            grad=np.zeros((rows, cols), dtype=np.float64),
            init=init,
            trainable=trainable,
        )
        self._entries[name] = param
        return param

    def __getitem__(self, name: str) -> Parameter:
        return self._entries[name]

    def __contains__(self, name: object) -> bool:
        return name in self._entries

    def __iter__(self) -> Iterator[Parameter]:
        return iter(self._entries.values())

    def __len__(self) -> int:
        return len(self._entries)

    def names(self) -> List[str]:
        return list(self._entries)

    def value(self, name: str) -> np.ndarray:
        return self._entries[name].value

    def grad(self, name: str) -> np.ndarray:
        return self._entries[name].grad

    def zero_grad(self) -> None:
        for param in self._entries.values():
            param.grad.fill(0.0)

    def parameter_count(self, exclude_prefix: Optional[str] = None) -> int:
        total = 0
        for param in self._entries.values():
            if exclude_prefix is not None and param.name.startswith(exclude_prefix):
                continue
            total += param.value.size
        return total

    def new_gradients(self) -> Dict[str, np.ndarray]:
        """Zeroed worker-local accumulators, one per parameter."""
        return {name: np.zeros_like(p.value) for name, p in self._entries.items()}

    def gradients(self) -> Dict[str, np.ndarray]:
        """The store's own accumulators, keyed by name."""
        return {name: p.grad for name, p in self._entries.items()}

    def add_gradients(self, grads: Dict[str, np.ndarray], scale: float = 1.0) -> None:
        for name, g in grads.items():
            self._entries[name].grad += scale * g

    def snapshot(self) -> Dict[str, np.ndarray]:
        return {name: p.value.copy() for name, p in self._entries.items()}

    def restore(self, snapshot: Dict[str, np.ndarray]) -> None:
        for name, arr in snapshot.items():
            param = self._entries[name]
            if arr.shape != param.value.shape:
                raise ShapeError(f"{name}: snapshot shape {arr.shape} != {param.value.shape}")
            param.value[...] = arr

    def assign(self, other: "ParameterStore") -> None:
        """Copy values from a store holding the same names and shapes."""
        missing = [name for name in self._entries if name not in other]
        extra = [name for name in other.names() if name not in self._entries]
        if missing or extra:
            raise ShapeError(f"parameter sets differ: missing={missing} unexpected={extra}")
        self.restore({p.name: p.value for p in other})


def init_parameters(store: ParameterStore, rng: Rng) -> ParameterStore:
    """Fill weights uniform in +-sqrt(6/(fan_in+fan_out)); zero biases and tables."""
    for param in store:
        if param.init == "uniform":
            fan_out, fan_in = param.shape
            bound = uniform_bound(fan_out, fan_in)
            param.value[...] = rng.uniform(-bound, bound, size=param.shape)
        elif param.init == "zeros":
            param.value.fill(0.0)
        param.grad.fill(0.0)
    logger.debug("initialized %d parameter entries", len(store))
    return store


__all__ = ["Parameter", "ParameterStore", "init_parameters", "INIT_RULES"]
