"""
Dense arithmetic and log-domain reductions.

Everything is float64; vectors are 1-D ndarrays and matrices 2-D C-order
ndarrays.
"""

from typing import Sequence, Union

import numpy as np
from scipy.special import logsumexp

from ..errors import EmptySupportError, ShapeError

Rng = np.random.Generator

ArrayLike = Union[np.ndarray, Sequence[float]]


def make_rng(seed: int) -> Rng:
    """Seeded PCG64 generator; identical seeds give identical streams."""
    return np.random.Generator(np.random.PCG64(int(seed) & 0xFFFFFFFFFFFFFFFF))


def log_sum_exp(v: ArrayLike) -> float:
    """log(sum(exp(v))) with max-subtraction."""
    arr = np.asarray(v, dtype=np.float64)
    if arr.size == 0:
        raise EmptySupportError("log_sum_exp of an empty vector")
    if np.all(np.isneginf(arr)):
        raise EmptySupportError("log_sum_exp over all -inf entries")
    return float(logsumexp(arr))


def matvec(m: np.ndarray, v: ArrayLike) -> np.ndarray:
    """Matrix-vector product with an explicit shape check."""
    m = np.asarray(m, dtype=np.float64)
    vec = np.asarray(v, dtype=np.float64)
    if m.ndim != 2 or vec.ndim != 1 or m.shape[1] != vec.shape[0]:
        raise ShapeError(f"cannot multiply {m.shape} matrix by {vec.shape} vector")
    return m @ vec


def uniform_bound(fan_out: int, fan_in: int) -> float:
    return float(np.sqrt(6.0 / (fan_in + fan_out)))


__all__ = ["Rng", "make_rng", "log_sum_exp", "matvec", "uniform_bound"]
