"""
Exact inference on the label chain, in log space.

Since every unary family scores y_t alone, the recursions run on the
combined unary U_t (the sum of the active families):

    log alpha_1(j) = A[BOS, j] + U_1(j)
    log alpha_t(j) = logsumexp_i(log alpha_{t-1}(i) + A[i, j]) + U_t(j)
    log Z          = logsumexp_j(log alpha_T(j))

There is no end-of-sequence transition.
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

import numpy as np
from scipy.special import logsumexp

from ..errors import LabelSetMismatchError, ShapeError
from ..numerics.ops import log_sum_exp
from ..potentials.lattice import PotentialLattice

logger = logging.getLogger(__name__)

NORMALIZATION_TOLERANCE = 1e-10


@dataclass
class ForwardTrellis:
    log_alpha: np.ndarray
    unary: np.ndarray


@dataclass
class ChainPosterior:
    log_z: float
    node_marginals: np.ndarray
    edge_marginals: np.ndarray

    def check(self, tol: float = NORMALIZATION_TOLERANCE) -> List[str]:
        """Violations of normalization and edge/node consistency; empty when sound."""
        problems = []
        node_err = np.abs(self.node_marginals.sum(axis=1) - 1.0)
        if node_err.size and node_err.max() > tol:
            problems.append(f"node rows off by {node_err.max():.3e}")
        if self.edge_marginals.size:
            slab_err = np.abs(self.edge_marginals.sum(axis=(1, 2)) - 1.0)
            if slab_err.max() > tol:
                problems.append(f"edge slabs off by {slab_err.max():.3e}")
            left = np.abs(self.edge_marginals.sum(axis=2) - self.node_marginals[:-1]).max()
            right = np.abs(self.edge_marginals.sum(axis=1) - self.node_marginals[1:]).max()
            if max(left, right) > tol:
                problems.append(f"edge/node marginals disagree by {max(left, right):.3e}")
        return problems


@dataclass
class PotentialGrads:
    """d(nll)/d(log-potential) for every lattice entry."""

    unaries: Dict[str, np.ndarray]
    transitions: np.ndarray


def log_partition(lattice: PotentialLattice) -> Tuple[float, ForwardTrellis]:
    A = lattice.transitions
    L = lattice.n_labels
    U = lattice.combined_unary()
    T = U.shape[0]
    log_alpha = np.empty((T, L))
    log_alpha[0] = A[L] + U[0]
    inner = A[:L]
    for t in range(1, T):
        log_alpha[t] = logsumexp(log_alpha[t - 1][:, None] + inner, axis=0) + U[t]
    return log_sum_exp(log_alpha[-1]), ForwardTrellis(log_alpha, U)


def _log_beta(lattice: PotentialLattice, unary: np.ndarray) -> np.ndarray:
    inner = lattice.transitions[: lattice.n_labels]
    T, L = unary.shape
    log_beta = np.zeros((T, L))
    for t in range(T - 2, -1, -1):
        log_beta[t] = logsumexp(inner + (unary[t + 1] + log_beta[t + 1])[None, :], axis=1)
    return log_beta


def posteriors(lattice: PotentialLattice) -> ChainPosterior:
    log_z, trellis = log_partition(lattice)
    log_alpha, unary = trellis.log_alpha, trellis.unary
    log_beta = _log_beta(lattice, unary)
    nodes = np.exp(log_alpha + log_beta - log_z)
    inner = lattice.transitions[: lattice.n_labels]
    edges = np.exp(
        log_alpha[:-1, :, None]
        + inner[None, :, :]
        + (unary[1:] + log_beta[1:])[:, None, :]
        - log_z
    )
    return ChainPosterior(log_z, nodes, edges)


def viterbi(lattice: PotentialLattice) -> Tuple[List[int], float]:
    """Best label sequence and its score; ties go to the lowest label index."""
    A = lattice.transitions
    L = lattice.n_labels
    U = lattice.combined_unary()
    T = U.shape[0]
    delta = A[L] + U[0]
    backpointers = np.zeros((T, L), dtype=np.int64)
    inner = A[:L]
    cols = np.arange(L)
    for t in range(1, T):
        scores = delta[:, None] + inner
        best = np.argmax(scores, axis=0)
        backpointers[t] = best
        delta = scores[best, cols] + U[t]
    last = int(np.argmax(delta))
    path = [last]
    for t in range(T - 1, 0, -1):
        path.append(int(backpointers[t, path[-1]]))
    path.reverse()
    return path, float(delta[last])


def _check_gold(lattice: PotentialLattice, gold: Sequence[int]) -> np.ndarray:
    y = np.asarray(gold, dtype=np.int64)
    if y.shape != (lattice.length,):
        raise ShapeError(f"gold has {y.size} labels for a lattice of length {lattice.length}")
    if y.size and (y.min() < 0 or y.max() >= lattice.n_labels):
        raise LabelSetMismatchError(f"gold label outside [0, {lattice.n_labels})")
    return y


def nll_and_potential_grads(
    lattice: PotentialLattice, gold: Sequence[int]
) -> Tuple[float, PotentialGrads]:
    """Negative log-likelihood of ``gold`` and its gradient in lattice space.

    Each unary family gets node_marginal - indicator(gold); the transition
    table gets expected minus observed edge counts, the BOS row from the
    first position.
    """
    y = _check_gold(lattice, gold)
    post = posteriors(lattice)
    L = lattice.n_labels
    T = lattice.length

    d_unary = post.node_marginals.copy()
    d_unary[np.arange(T), y] -= 1.0

    d_trans = np.zeros_like(lattice.transitions)
    d_trans[:L] = post.edge_marginals.sum(axis=0)
    np.add.at(d_trans, (y[:-1], y[1:]), -1.0)
    d_trans[L] = post.node_marginals[0]
    d_trans[L, y[0]] -= 1.0

    nll = max(post.log_z - lattice.path_score(y), 0.0)
    grads = PotentialGrads({role: d_unary for role in lattice.roles}, d_trans)
    return nll, grads


def sequence_nll(lattice: PotentialLattice, gold: Sequence[int]) -> float:
    y = _check_gold(lattice, gold)
    log_z, _ = log_partition(lattice)
    return max(log_z - lattice.path_score(y), 0.0)


__all__ = [
    "NORMALIZATION_TOLERANCE",
    "ForwardTrellis",
    "ChainPosterior",
    "PotentialGrads",
    "log_partition",
    "posteriors",
    "viterbi",
    "nll_and_potential_grads",
    "sequence_nll",
]
