"""
Exhaustive enumeration over every label sequence, for checking the
dynamic programs on small instances.
"""

import itertools
from dataclasses import dataclass
from typing import List, Sequence

import numpy as np
from scipy.special import logsumexp

from ..errors import InstanceTooLargeError
from ..numerics.ops import Rng
from ..potentials.lattice import PotentialLattice
from ..potentials.networks import ROLE_OFFSETS

MAX_SEQUENCES = 10**6


@dataclass
class BruteForceResult:
    log_z: float
    node_marginals: np.ndarray
    edge_marginals: np.ndarray
    argmax: List[int]
    max_score: float
    sequences: int


def _score_all(lattice: PotentialLattice, paths: np.ndarray) -> np.ndarray:
    A = lattice.transitions
    bos = lattice.n_labels
    scores = A[bos, paths[:, 0]].copy()
    for t in range(1, paths.shape[1]):
        scores += A[paths[:, t - 1], paths[:, t]]
    for table in lattice.unaries.values():
        for t in range(paths.shape[1]):
            scores += table[t, paths[:, t]]
    return scores


def brute_force(lattice: PotentialLattice) -> BruteForceResult:
    T, L = lattice.length, lattice.n_labels
    count = L**T
    if count > MAX_SEQUENCES:
        raise InstanceTooLargeError(f"{L}^{T} = {count} sequences exceeds {MAX_SEQUENCES}")
    paths = np.array(list(itertools.product(range(L), repeat=T)), dtype=np.int64).reshape(count, T)
    scores = _score_all(lattice, paths)
    log_z = float(logsumexp(scores))
    probs = np.exp(scores - log_z)

    nodes = np.zeros((T, L))
    for t in range(T):
        np.add.at(nodes[t], paths[:, t], probs)
    edges = np.zeros((max(T - 1, 0), L, L))
    for t in range(T - 1):
        np.add.at(edges[t], (paths[:, t], paths[:, t + 1]), probs)

    best = scores.max()
    tied = paths[scores == best]
    # lexsort keys: the last row (final position) is the primary key
    winner = tied[np.lexsort(tied.T)[0]]
    return BruteForceResult(log_z, nodes, edges, [int(v) for v in winner], float(best), count)


def random_lattice(
    roles: Sequence[str],
    length: int,
    n_labels: int,
    rng: Rng,
    low: float = -2.0,
    high: float = 2.0,
) -> PotentialLattice:
    """Uniform random log-potentials honoring the zero-boundary convention."""
    transitions = rng.uniform(low, high, size=(n_labels + 1, n_labels))
    unaries = {}
    for role in roles:
        table = rng.uniform(low, high, size=(length, n_labels))
        offset = ROLE_OFFSETS.get(role, 0)
        for t in range(length):
            if not 0 <= t + offset < length:
                table[t] = 0.0
        unaries[role] = table
    return PotentialLattice(transitions, unaries)


__all__ = ["MAX_SEQUENCES", "BruteForceResult", "brute_force", "random_lattice"]
