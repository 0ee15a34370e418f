"""
Word-lookup embedding tables (the non-contextual path).

Pretrained files are plain text: one word per line followed by its
space-separated vector components.
"""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, List, Optional, Union

import numpy as np

from ..data.conll import Sentence
from ..errors import ParseError
from ..numerics.ops import Rng, uniform_bound
from .vocabulary import PAD, UNK, Vocabulary

logger = logging.getLogger(__name__)


@dataclass
class EmbeddingSequence:
    """Per-token vectors h_1..h_T; ``token_ids`` are table rows when looked up."""

    vectors: np.ndarray
    token_ids: Optional[np.ndarray] = None

    def __post_init__(self) -> None:
        if self.vectors.ndim != 2 or self.vectors.shape[0] < 1 or self.vectors.shape[1] < 1:
            raise ValueError(f"embedding sequence needs shape (T>=1, dim>=1), got {self.vectors.shape}")

    @property
    def length(self) -> int:
        return int(self.vectors.shape[0])

    @property
    def dim(self) -> int:
        return int(self.vectors.shape[1])


@dataclass
class EmbeddingTable:
    vocabulary: Vocabulary
    matrix: np.ndarray
    trainable: bool = False

    def __post_init__(self) -> None:
        if self.matrix.shape[0] != len(self.vocabulary):
            raise ValueError(
                f"table has {self.matrix.shape[0]} rows for {len(self.vocabulary)} words"
            )
        if self.matrix.ndim != 2 or self.matrix.shape[1] < 1:
            raise ValueError("embedding dim must be positive")

    @property
    def dim(self) -> int:
        return int(self.matrix.shape[1])


def load_pretrained(
    path: Union[str, Path], expected_dim: int, lowercase: bool = False
) -> EmbeddingTable:
    """Read a text-format table; UNK is the mean vector and PAD zeros.

    Duplicate words keep their first occurrence. Rows spelled like the
    reserved tokens (<pad>, <unk>) are skipped with a warning.
    """
    path_str = str(path)
    vocabulary = Vocabulary(lowercase=lowercase)
    rows: List[np.ndarray] = []
    duplicates = 0
    reserved: List[str] = []
    with open(path_str, "r", encoding="utf-8") as f:
        for line_number, line in enumerate(f, start=1):
            fields = line.split()
            if not fields:
                continue
            if len(fields) != expected_dim + 1:
                raise ParseError(
                    f"expected word plus {expected_dim} values, found {len(fields)} fields",
                    path=path_str,
                    line_number=line_number,
                )
            try:
                vector = np.array(fields[1:], dtype=np.float64)
            except ValueError:
                raise ParseError("non-numeric vector component", path=path_str, line_number=line_number) from None
            if vocabulary.normalize(fields[0]) in (PAD, UNK):
                reserved.append(fields[0])
            elif vocabulary.add(fields[0]):
                rows.append(vector)
            else:
                duplicates += 1
    if not rows:
        raise ParseError("no embedding vectors found", path=path_str)
    if duplicates:
        logger.warning("%s: %d duplicate words ignored (first occurrence kept)", path_str, duplicates)
    if reserved:
        logger.warning(
            "%s: vectors for reserved tokens %s ignored; PAD is zero and UNK the mean vector",
            path_str, ", ".join(sorted(set(reserved))),
        )

    loaded = np.vstack(rows)
    matrix = np.zeros((len(vocabulary), expected_dim), dtype=np.float64)
    matrix[vocabulary.unk_index] = loaded.mean(axis=0)
    matrix[2:] = loaded
    logger.info("loaded %d pretrained vectors of dim %d from %s", len(rows), expected_dim, path_str)
    return EmbeddingTable(vocabulary, matrix)


def build_vocabulary(sentences: Iterable[Sentence], lowercase: bool = False) -> Vocabulary:
    vocabulary = Vocabulary(lowercase=lowercase)
    for sentence in sentences:
        for word in sentence.words:
            vocabulary.add(word)
    return vocabulary


def random_table(vocabulary: Vocabulary, dim: int, rng: Rng) -> EmbeddingTable:
    bound = uniform_bound(len(vocabulary), dim)
    matrix = rng.uniform(-bound, bound, size=(len(vocabulary), dim))
    matrix[vocabulary.pad_index] = 0.0
    return EmbeddingTable(vocabulary, matrix, trainable=True)


def one_hot_table(vocabulary: Vocabulary) -> EmbeddingTable:
    """Frozen identity table: each word is its own indicator vector."""
    return EmbeddingTable(vocabulary, np.eye(len(vocabulary), dtype=np.float64), trainable=False)


def embed_sentence(table: EmbeddingTable, sentence: Sentence) -> EmbeddingSequence:
    ids = np.array([table.vocabulary.lookup(w) for w in sentence.words], dtype=np.int64)
    return EmbeddingSequence(table.matrix[ids], token_ids=ids)


__all__ = [
    "EmbeddingSequence",
    "EmbeddingTable",
    "load_pretrained",
    "build_vocabulary",
    "random_table",
    "one_hot_table",
    "embed_sentence",
]
