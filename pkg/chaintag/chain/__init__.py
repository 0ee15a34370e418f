"""
Chain package: forward-backward, Viterbi and the enumeration oracle.
"""

from .inference import (
    NORMALIZATION_TOLERANCE,
    ChainPosterior,
    ForwardTrellis,
    PotentialGrads,
    log_partition,
    nll_and_potential_grads,
    posteriors,
    sequence_nll,
    viterbi,
)
from .oracle import MAX_SEQUENCES, BruteForceResult, brute_force, random_lattice

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
    "MAX_SEQUENCES",
    "BruteForceResult",
    "brute_force",
    "random_lattice",
]
