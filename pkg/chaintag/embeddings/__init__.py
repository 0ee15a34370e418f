"""
Embedding sources: word-lookup tables and precomputed per-token vectors.
"""

from .precomputed import align, load_precomputed
from .table import (
    EmbeddingSequence,
    EmbeddingTable,
    build_vocabulary,
    embed_sentence,
    load_pretrained,
    one_hot_table,
    random_table,
)
from .vocabulary import PAD, UNK, Vocabulary

__all__ = [
    "PAD",
    "UNK",
    "Vocabulary",
    "EmbeddingSequence",
    "EmbeddingTable",
    "load_pretrained",
    "build_vocabulary",
    "random_table",
    "one_hot_table",
    "embed_sentence",
    "load_precomputed",
    "align",
]
