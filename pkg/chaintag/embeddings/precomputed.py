"""
Precomputed per-token vectors (the contextual path).

File layout::

    DIM <d>
    SENT <id> <token_count>
    <d floats>            (token_count lines)

    SENT <id> <token_count>
    ...

Sub-word pooling happens in whatever exported the file; this loader only
validates one vector per word.
"""

import logging
from pathlib import Path
from typing import Dict, List, Optional, Union

import numpy as np

from ..data.conll import Corpus
from ..errors import AlignmentError, ParseError
from .table import EmbeddingSequence

logger = logging.getLogger(__name__)


def _header_dim(fields: List[str], path: str, line_number: int) -> int:
    if len(fields) != 2 or fields[0] != "DIM":
        raise ParseError("expected header 'DIM <d>'", path=path, line_number=line_number)
    try:
        dim = int(fields[1])
    except ValueError:
        raise ParseError(f"bad dimension {fields[1]!r}", path=path, line_number=line_number) from None
    if dim < 1:
        raise ParseError("dimension must be positive", path=path, line_number=line_number)
    return dim


def load_precomputed(
    path: Union[str, Path], corpus: Optional[Corpus] = None
) -> Dict[str, EmbeddingSequence]:
    """Map sentence id to its vectors; checks token counts against ``corpus`` if given."""
    path_str = str(path)
    sequences: Dict[str, EmbeddingSequence] = {}
    dim: Optional[int] = None
    current_id: Optional[str] = None
    expected = 0
    rows: List[np.ndarray] = []
    header_line = 0

    def close(line_number: int) -> None:
        nonlocal current_id
        if current_id is None:
            return
        if len(rows) != expected:
            raise ParseError(
                f"sentence {current_id} declares {expected} tokens but has {len(rows)} vectors",
                path=path_str,
                line_number=line_number,
            )
        sequences[current_id] = EmbeddingSequence(np.vstack(rows))
        current_id = None

    with open(path_str, "r", encoding="utf-8") as f:
        line_number = 0
        for line_number, line in enumerate(f, start=1):
            fields = line.split()
            if not fields:
                continue
            if dim is None:
                dim = _header_dim(fields, path_str, line_number)
                continue
            if fields[0] == "SENT":
                close(line_number)
                if len(fields) != 3:
                    raise ParseError("expected 'SENT <id> <token_count>'", path=path_str, line_number=line_number)
                try:
                    expected = int(fields[2])
                except ValueError:
                    raise ParseError(f"bad token count {fields[2]!r}", path=path_str, line_number=line_number) from None
                if expected < 1:
                    raise ParseError("token count must be positive", path=path_str, line_number=line_number)
                if fields[1] in sequences:
                    raise ParseError(f"sentence id {fields[1]} repeated", path=path_str, line_number=line_number)
                current_id, rows, header_line = fields[1], [], line_number
                continue
            if current_id is None:
                raise ParseError("vector line outside a SENT block", path=path_str, line_number=line_number)
            if len(fields) != dim:
                raise ParseError(
                    f"expected {dim} values, found {len(fields)}", path=path_str, line_number=line_number
                )
            if len(rows) == expected:
                raise ParseError(
                    f"sentence {current_id} (line {header_line}) has more than {expected} vectors",
                    path=path_str,
                    line_number=line_number,
                )
            try:
                rows.append(np.array(fields, dtype=np.float64))
            except ValueError:
                raise ParseError("non-numeric vector component", path=path_str, line_number=line_number) from None
        close(line_number)

    if dim is None:
        raise ParseError("empty precomputed-embedding file", path=path_str)
    logger.info("loaded %d precomputed sequences of dim %d from %s", len(sequences), dim, path_str)

    if corpus is not None:
        align(sequences, corpus)
    return sequences


def align(sequences: Dict[str, EmbeddingSequence], corpus: Corpus) -> None:
    for sentence in corpus.sentences:
        seq = sequences.get(sentence.sid)
        if seq is None:
            raise AlignmentError(f"no precomputed vectors for sentence {sentence.sid}")
        if seq.length != len(sentence):
            raise AlignmentError(
                f"sentence {sentence.sid}: {len(sentence)} tokens but {seq.length} vectors"
            )


__all__ = ["load_precomputed", "align"]
