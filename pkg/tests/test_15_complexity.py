import time

import numpy as np
import pytest

from chaintag.chain import log_partition, random_lattice
from chaintag.numerics import make_rng

REPEATS = 15


def _forward_seconds(length, n_labels, seed=0):
    lattice = random_lattice(("phi", "eta", "xi"), length, n_labels, make_rng(seed))
    log_partition(lattice)
    best = float("inf")
    for _ in range(REPEATS):
        start = time.perf_counter()
        log_partition(lattice)
        best = min(best, time.perf_counter() - start)
    return best


@pytest.mark.perf
def test_forward_time_linear_in_length():
    lengths = np.array([50, 100, 200, 400], dtype=float)
    seconds = np.array([_forward_seconds(int(T), 10) for T in lengths])
    r = np.corrcoef(lengths, seconds)[0, 1]
    assert r * r >= 0.98


@pytest.mark.perf
def test_forward_time_quadratic_in_labels():
    """A 4x label increase costs 8-24x forward time.

    Measured at 400 vs 100 labels rather than 40 vs 10: below ~100 labels
    the per-position numpy overhead dominates the L x L work and the ratio
    flattens toward 1.
    """
    ratio = _forward_seconds(50, 400) / _forward_seconds(50, 100)
    assert 8.0 <= ratio <= 24.0
