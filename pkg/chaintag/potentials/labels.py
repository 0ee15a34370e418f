"""Ordered label inventory."""

from typing import Dict, Iterable, Iterator, List

from ..errors import LabelSetMismatchError


class LabelSet:
    """Label strings in a fixed order; a label's position is its index."""

    def __init__(self, labels: Iterable[str]):
        self.labels: List[str] = list(labels)
        self._index: Dict[str, int] = {}
        for i, label in enumerate(self.labels):
            if label in self._index:
                raise ValueError(f"duplicate label {label!r}")
            self._index[label] = i

    @classmethod
    def from_sequences(cls, sequences: Iterable[Iterable[str]]) -> "LabelSet":
        """Labels in first-seen order."""
        seen: Dict[str, None] = {}
        for seq in sequences:
            for label in seq:
                seen.setdefault(label, None)
        return cls(seen)

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise LabelSetMismatchError(f"unknown label {label!r}") from None

    def __getitem__(self, i: int) -> str:
        return self.labels[i]

    def __len__(self) -> int:
        return len(self.labels)

    def __iter__(self) -> Iterator[str]:
        return iter(self.labels)

    def __contains__(self, label: object) -> bool:
        return label in self._index

    def __eq__(self, other: object) -> bool:
        return isinstance(other, LabelSet) and self.labels == other.labels

    def __repr__(self) -> str:
        return f"LabelSet({self.labels!r})"


__all__ = ["LabelSet"]
