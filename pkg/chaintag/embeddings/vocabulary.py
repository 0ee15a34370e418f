"""Word-to-row index with reserved PAD and UNK entries."""

from typing import Dict, Iterable, List

PAD = "<pad>"
UNK = "<unk>"


class Vocabulary:
    """Contiguous word indices; PAD is row 0 and UNK row 1."""

    pad_index = 0
    unk_index = 1

    def __init__(self, words: Iterable[str] = (), lowercase: bool = False):
        self.lowercase = lowercase
        self._index: Dict[str, int] = {PAD: self.pad_index, UNK: self.unk_index}
        self._words: List[str] = [PAD, UNK]
        for word in words:
            self.add(word)

    def normalize(self, word: str) -> str:
        return word.lower() if self.lowercase else word

    def add(self, word: str) -> bool:
        """Insert ``word``; returns False when it was already present."""
        key = self.normalize(word)
        if key in self._index:
            return False
        self._index[key] = len(self._words)
        self._words.append(key)
        return True

    def lookup(self, word: str) -> int:
        return self._index.get(self.normalize(word), self.unk_index)

    def words(self) -> List[str]:
        return list(self._words)

    def __len__(self) -> int:
        return len(self._words)

    def __contains__(self, word: object) -> bool:
        return isinstance(word, str) and self.normalize(word) in self._index


__all__ = ["PAD", "UNK", "Vocabulary"]
