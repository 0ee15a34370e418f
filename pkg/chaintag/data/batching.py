"""Validation splits and minibatch streams."""

from typing import Iterator, List, Tuple

import numpy as np

from ..numerics.ops import Rng
from .conll import Corpus, Sentence

DEFAULT_BATCH_SIZE = 128
DEFAULT_VALID_SIZE = 1000


def split_validation(corpus: Corpus, n: int, rng: Rng) -> Tuple[Corpus, Corpus]:
    """Sample ``n`` sentences for validation; both halves keep corpus order."""
    if not 0 < n < len(corpus):
        raise ValueError(f"validation size {n} must be in (0, {len(corpus)})")
    chosen = np.sort(rng.permutation(len(corpus))[:n])
    mask = np.zeros(len(corpus), dtype=bool)
    mask[chosen] = True
    train = corpus.subset([i for i in range(len(corpus)) if not mask[i]])
    valid = corpus.subset([int(i) for i in chosen])
    return train, valid


def batches(
    corpus: Corpus, batch_size: int, rng: Rng, shuffle: bool = True
) -> Iterator[List[Sentence]]:
    """One epoch of minibatches; the last batch may be short."""
    if batch_size < 1:
        raise ValueError("batch_size must be at least 1")
    order = rng.permutation(len(corpus)) if shuffle else np.arange(len(corpus))
    for start in range(0, len(order), batch_size):
        yield [corpus.sentences[int(i)] for i in order[start:start + batch_size]]


__all__ = ["DEFAULT_BATCH_SIZE", "DEFAULT_VALID_SIZE", "split_validation", "batches"]
