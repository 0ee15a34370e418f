"""
CoNLL column-format corpora.

Whitespace-separated columns, one token per line, a blank line between
sentences. Lines whose first field is ``-DOCSTART-`` are skipped.
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, List, Optional, Sequence, TextIO, Union

from ..errors import EmptyCorpusError, ParseError
from ..potentials.labels import LabelSet

logger = logging.getLogger(__name__)

DOCSTART = "-DOCSTART-"
SCHEMES = ("raw", "BIO2", "IOB1")


@dataclass
class Sentence:
    """Words with gold label indices; ``labels`` is empty for unlabelled input."""

    words: List[str]
    labels: List[int]
    sid: str = ""
    first_line: int = 0
    last_line: int = 0
    columns: List[List[str]] = field(default_factory=list)

    def __post_init__(self) -> None:
        if not self.words:
            raise ValueError("a sentence needs at least one word")
        if self.labels and len(self.labels) != len(self.words):
            raise ValueError(
                f"sentence {self.sid}: {len(self.words)} words but {len(self.labels)} labels"
            )

    def __len__(self) -> int:
        return len(self.words)

    @property
    def labelled(self) -> bool:
        return bool(self.labels)


@dataclass
class Corpus:
    sentences: List[Sentence]
    label_set: LabelSet
    scheme: str = "raw"

    def __post_init__(self) -> None:
        if self.scheme not in SCHEMES:
            raise ValueError(f"unknown tag scheme {self.scheme!r}")

    def __len__(self) -> int:
        return len(self.sentences)

    def __iter__(self) -> Iterator[Sentence]:
        return iter(self.sentences)

    def label_strings(self, sentence: Sentence) -> List[str]:
        return [self.label_set[i] for i in sentence.labels]

    def label_sequences(self) -> List[List[str]]:
        return [self.label_strings(s) for s in self.sentences]

    def subset(self, indices: Sequence[int]) -> "Corpus":
        return Corpus([self.sentences[i] for i in indices], self.label_set, self.scheme)

    def token_count(self) -> int:
        return sum(len(s) for s in self.sentences)

    def require_nonempty(self, what: str = "corpus") -> None:
        if not self.sentences:
            raise EmptyCorpusError(f"{what} has no sentences")

    def with_label_set(self, label_set: LabelSet) -> "Corpus":
        """Re-index labels against another label set; unknown labels raise."""
        if label_set == self.label_set:
            return self
        sentences = []
        for s in self.sentences:
            labels = [label_set.index(self.label_set[i]) for i in s.labels]
            sentences.append(
                Sentence(s.words, labels, s.sid, s.first_line, s.last_line, s.columns)
            )
        return Corpus(sentences, label_set, self.scheme)


def _iter_blocks(
    stream: TextIO, path: str
) -> Iterator[List[tuple]]:
    """Yield sentences as lists of (line_number, fields)."""
    block: List[tuple] = []
    width: Optional[int] = None
    for line_number, raw in enumerate(stream, start=1):
        fields = raw.split()
        if not fields:
            if block:
                yield block
                block = []
            continue
        if fields[0] == DOCSTART:
            continue
        if width is None:
            width = len(fields)
        elif len(fields) != width:
            raise ParseError(
                f"expected {width} columns, found {len(fields)}", path=path, line_number=line_number
            )
        block.append((line_number, fields))
    if block:
        yield block


def read_conll(
    path: Union[str, Path],
    word_column: int = 0,
    label_column: Optional[int] = -1,
    scheme: str = "raw",
) -> Corpus:
    """Load a column-format corpus; the label set is built in first-seen order.

    ``label_column=None`` reads unlabelled input.
    """
    path_str = str(path)
    raw_sentences = []
    with open(path_str, "r", encoding="utf-8") as f:
        for block in _iter_blocks(f, path_str):
            try:
                words = [fields[word_column] for _, fields in block]
                tags = [fields[label_column] for _, fields in block] if label_column is not None else []
            except IndexError:
                raise ParseError(
                    "column index out of range", path=path_str, line_number=block[0][0]
                ) from None
            raw_sentences.append((words, tags, block))

    label_set = LabelSet.from_sequences(tags for _, tags, _ in raw_sentences)
    sentences = []
    for i, (words, tags, block) in enumerate(raw_sentences):
        sentences.append(
            Sentence(
                words=words,
                labels=[label_set.index(t) for t in tags],
                sid=str(i),
                first_line=block[0][0],
                last_line=block[-1][0],
                columns=[fields for _, fields in block],
            )
        )
    corpus = Corpus(sentences, label_set, scheme)
    logger.info(
        "read %s: %d sentences, %d tokens, %d labels",
        path_str, len(corpus), corpus.token_count(), len(label_set),
    )
    return corpus


def write_conll(
    corpus: Corpus,
    stream: TextIO,
    predictions: Optional[Sequence[Sequence[str]]] = None,
    keep_columns: bool = False,
) -> None:
    """Write ``word label`` lines, or the original columns when ``keep_columns``.

    ``predictions`` appends one extra column per token.
    """
    for n, sentence in enumerate(corpus.sentences):
        gold = corpus.label_strings(sentence)
        for t, word in enumerate(sentence.words):
            if keep_columns and sentence.columns:
                fields = list(sentence.columns[t])
            else:
                fields = [word] + ([gold[t]] if gold else [])
            if predictions is not None:
                fields.append(predictions[n][t])
            stream.write(" ".join(fields) + "\n")
        stream.write("\n")


__all__ = ["DOCSTART", "SCHEMES", "Sentence", "Corpus", "read_conll", "write_conll"]
