"""
Span extraction from BIO2 label sequences.

An I-X that does not continue an open X span opens a new one, as the
CoNLL scorer does; such repairs are counted.
"""

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from ..data.schemes import OUTSIDE, split_tag


@dataclass(frozen=True, order=True)
class Span:
    """Token range [start, end], both inclusive."""

    type: str
    start: int
    end: int

    def __post_init__(self) -> None:
        if self.start > self.end:
            raise ValueError(f"span start {self.start} after end {self.end}")


def scan_spans(labels: Sequence[str]) -> Tuple[List[Span], int]:
    """Spans in order of appearance, plus the number of stray I- tags repaired."""
    spans: List[Span] = []
    repaired = 0
    open_type: Optional[str] = None
    open_start = 0
    for t, tag in enumerate(labels):
        prefix, kind = split_tag(tag)
        if prefix == "I" and open_type == kind:
            continue
        if open_type is not None:
            spans.append(Span(open_type, open_start, t - 1))
            open_type = None
        if prefix == OUTSIDE:
            continue
        if prefix == "I":
            repaired += 1
        open_type, open_start = kind, t
    if open_type is not None:
        spans.append(Span(open_type, open_start, len(labels) - 1))
    return spans, repaired


def extract_spans(labels: Sequence[str]) -> List[Span]:
    return scan_spans(labels)[0]


def spans_to_bio2(spans: Sequence[Span], length: int) -> List[str]:
    labels = [OUTSIDE] * length
    for span in spans:
        labels[span.start] = f"B-{span.type}"
        for t in range(span.start + 1, span.end + 1):
            labels[t] = f"I-{span.type}"
    return labels


__all__ = ["Span", "scan_spans", "extract_spans", "spans_to_bio2"]
