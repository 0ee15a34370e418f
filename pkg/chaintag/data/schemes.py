"""
Span tag schemes.

BIO2: every span opens with B-X. IOB1: spans open with I-X, and B-X only
separates two adjacent spans of the same type.
"""

import logging
from typing import List, Sequence, Tuple

from ..errors import TagFormatError
from ..potentials.labels import LabelSet
from .conll import Corpus, Sentence

logger = logging.getLogger(__name__)

OUTSIDE = "O"


def split_tag(tag: str) -> Tuple[str, str]:
    """``"B-NP"`` -> ``("B", "NP")``; ``"O"`` -> ``("O", "")``."""
    if tag == OUTSIDE:
        return OUTSIDE, ""
    if len(tag) > 2 and tag[1] == "-" and tag[0] in ("B", "I"):
        return tag[0], tag[2:]
    raise TagFormatError(f"malformed tag {tag!r}: expected B-X, I-X or O")


def iob1_to_bio2(tags: Sequence[str]) -> List[str]:
    out: List[str] = []
    prev_prefix, prev_type = OUTSIDE, ""
    for tag in tags:
        prefix, kind = split_tag(tag)
        if prefix == "I" and not (prev_prefix in ("B", "I") and prev_type == kind):
            prefix = "B"
        out.append(OUTSIDE if prefix == OUTSIDE else f"{prefix}-{kind}")
        prev_prefix, prev_type = prefix, kind
    return out


def bio2_to_iob1(tags: Sequence[str]) -> List[str]:
    out: List[str] = []
    prev_prefix, prev_type = OUTSIDE, ""
    for tag in tags:
        prefix, kind = split_tag(tag)
        new_prefix = prefix
        if prefix == "B" and not (prev_prefix in ("B", "I") and prev_type == kind):
            new_prefix = "I"
        out.append(OUTSIDE if prefix == OUTSIDE else f"{new_prefix}-{kind}")
        prev_prefix, prev_type = prefix, kind
    return out


_CONVERTERS = {
    ("IOB1", "BIO2"): iob1_to_bio2,
    ("BIO2", "IOB1"): bio2_to_iob1,
}


def convert_scheme(corpus: Corpus, target: str) -> Corpus:
    """Re-encode every label sequence in ``target``; same scheme is the identity."""
    if corpus.scheme == target:
        for seq in corpus.label_sequences():
            if target != "raw":
                for tag in seq:
                    split_tag(tag)
        return corpus
    if target == "raw":
        return Corpus(corpus.sentences, corpus.label_set, "raw")
    try:
        convert = _CONVERTERS[(corpus.scheme, target)]
    except KeyError:
        raise ValueError(f"cannot convert {corpus.scheme} labels to {target}") from None

    converted = [convert(seq) for seq in corpus.label_sequences()]
    label_set = LabelSet.from_sequences(converted)
    sentences = [
        Sentence(s.words, [label_set.index(t) for t in tags], s.sid, s.first_line, s.last_line, s.columns)
        for s, tags in zip(corpus.sentences, converted)
    ]
    logger.info("converted %d sentences from %s to %s", len(sentences), corpus.scheme, target)
    return Corpus(sentences, label_set, target)


__all__ = ["OUTSIDE", "split_tag", "iob1_to_bio2", "bio2_to_iob1", "convert_scheme"]
