"""
Per-sentence log-potential lattices.

Every unary family scores label y_t from some state: its own (eta), a
neighbor at offset -1/+1 (phi/xi), offset -2/+2 (pi/zeta) or the
zero-padded window [g_{t-1}; g_t; g_{t+1}] (sigma). Positions whose
neighbor falls outside the sentence get an all-zero row, the log of the
multiplicative identity. Transitions are an (|labels|+1) x |labels| table
whose last row scores the first label (BOS).
"""

import logging
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Any, Dict, Mapping, Optional, Tuple

import numpy as np

from ..errors import CacheError, ShapeError
from ..numerics.ops import Rng
from .networks import ROLE_OFFSETS, ROLES

if TYPE_CHECKING:
    from ..encoder.bilstm import EncodedSequence

logger = logging.getLogger(__name__)

TRANSITIONS = "potentials.transitions"


@dataclass
class PotentialLattice:
    transitions: np.ndarray
    unaries: Dict[str, np.ndarray]
    cache: Optional[Dict[str, Any]] = field(default=None, repr=False)

    def __post_init__(self) -> None:
        n = self.transitions.shape[1]
        if self.transitions.shape != (n + 1, n):
            raise ShapeError(f"transition table must be (L+1) x L, got {self.transitions.shape}")
        if not self.unaries:
            raise ShapeError("a lattice needs at least one unary family")
        lengths = {u.shape for u in self.unaries.values()}
        if len(lengths) != 1:
            raise ShapeError(f"unary tables disagree in shape: {sorted(lengths)}")
        T, L = next(iter(lengths))
        if L != n or T < 1:
            raise ShapeError(f"unary tables of shape {(T, L)} do not fit {n} labels")
        for role in self.unaries:
            if role not in ROLES:
                raise ValueError(f"unknown potential role {role!r}")

    @property
    def length(self) -> int:
        return int(next(iter(self.unaries.values())).shape[0])

    @property
    def n_labels(self) -> int:
        return int(self.transitions.shape[1])

    @property
    def roles(self) -> Tuple[str, ...]:
        return tuple(self.unaries)

    def combined_unary(self) -> np.ndarray:
        """Sum of every active family, (T, L); all families depend on y_t only."""
        total = np.zeros((self.length, self.n_labels))
        for table in self.unaries.values():
            total += table
        return total

    def path_score(self, labels) -> float:
        y = [int(v) for v in labels]
        bos = self.n_labels
        score = self.transitions[bos, y[0]]
        for t in range(1, len(y)):
            score += self.transitions[y[t - 1], y[t]]
        for table in self.unaries.values():
            score += sum(table[t, y[t]] for t in range(len(y)))
        return float(score)

    def dump(self) -> str:
        """Plain-text rendering used in failure diagnostics."""
        with np.printoptions(precision=6, suppress=True, linewidth=200):
            lines = [f"T={self.length} L={self.n_labels}", f"transitions=\n{self.transitions}"]
            for role, table in self.unaries.items():
                lines.append(f"{role}=\n{table}")
        return "\n".join(lines)


def _window(g: np.ndarray) -> np.ndarray:
    T, D = g.shape
    padded = np.vstack([np.zeros((1, D)), g, np.zeros((1, D))])
    return np.hstack([padded[:-2], padded[1:-1], padded[2:]])


def build_lattice(
    emitters: Mapping[str, Any],
    transitions: np.ndarray,
    g: "EncodedSequence",
    training: bool = False,
    rng: Optional[Rng] = None,
) -> PotentialLattice:
    """Score every active family at every position.

    ``emitters`` maps role to a PotentialNet or LinearEmission.
    """
    states = g.vectors
    T = states.shape[0]
    if T < 1:
        raise ShapeError("cannot build a lattice for an empty sequence")
    unaries: Dict[str, np.ndarray] = {}
    cache: Dict[str, Any] = {}
    for role, emitter in emitters.items():
        table = np.zeros((T, emitter.n_labels))
        if role == "sigma":
            positions = np.arange(T)
            out, role_cache = emitter.forward(_window(states), training, rng)
            table[:] = out
        else:
            offset = ROLE_OFFSETS[role]
            positions = np.arange(max(0, -offset), min(T, T - offset))
            role_cache = None
            if positions.size:
                out, role_cache = emitter.forward(states[positions + offset], training, rng)
                table[positions] = out
        unaries[role] = table
        if training:
            cache[role] = (emitter, positions, role_cache)
    if training:
        cache["__dim__"] = states.shape[1]
    return PotentialLattice(transitions, unaries, cache if training else None)


def lattice_backward(
    lattice: PotentialLattice,
    unary_grads: Mapping[str, np.ndarray],
    transition_grad: Optional[np.ndarray],
    grads: Dict[str, np.ndarray],
) -> np.ndarray:
    """Chain lattice-space gradients into the emitters; returns dL/dg of shape (T, dim).

    A state g_t collects a term from every family that consumed it.
    """
    if lattice.cache is None:
        raise CacheError("lattice_backward needs a lattice built with training=True")
    T = lattice.length
    D = lattice.cache["__dim__"]
    dg = np.zeros((T, D))
    if transition_grad is not None:
        grads[TRANSITIONS] += transition_grad
    for role in lattice.roles:
        emitter, positions, role_cache = lattice.cache[role]
        if positions.size == 0:
            continue
        upstream = unary_grads[role][positions]
        d_inputs = emitter.backward(role_cache, upstream, grads)
        if role == "sigma":
            dg[:-1] += d_inputs[1:, :D]
            dg += d_inputs[:, D:2 * D]
            dg[1:] += d_inputs[:-1, 2 * D:]
        else:
            np.add.at(dg, positions + ROLE_OFFSETS[role], d_inputs)
    return dg


__all__ = ["TRANSITIONS", "PotentialLattice", "build_lattice", "lattice_backward"]
