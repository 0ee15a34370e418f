"""
Data package: column-format corpora, tag schemes and batching.
"""

from .batching import DEFAULT_BATCH_SIZE, DEFAULT_VALID_SIZE, batches, split_validation
from .conll import DOCSTART, SCHEMES, Corpus, Sentence, read_conll, write_conll
from .schemes import OUTSIDE, bio2_to_iob1, convert_scheme, iob1_to_bio2, split_tag

__all__ = [
    "Sentence",
    "Corpus",
    "DOCSTART",
    "SCHEMES",
    "read_conll",
    "write_conll",
    "OUTSIDE",
    "split_tag",
    "iob1_to_bio2",
    "bio2_to_iob1",
    "convert_scheme",
    "DEFAULT_BATCH_SIZE",
    "DEFAULT_VALID_SIZE",
    "split_validation",
    "batches",
]
