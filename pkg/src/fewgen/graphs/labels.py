"""Label vocabularies: interned label texts with contiguous integer ids."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator

from ..errors import VocabularyError

UNLABELED_EDGE = "_"


@dataclass(frozen=True)
class LabelVocabulary:
    """
    An ordered, immutable bijection between label ids and label texts.

    Ids are the positions in `texts`, so they are contiguous from 0.
    """

    texts: tuple[str, ...]
    _index: dict[str, int] = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        index: dict[str, int] = {}
        for i, text in enumerate(self.texts):
            if not text or any(ch.isspace() for ch in text):
                raise VocabularyError(f"Invalid label text: {text!r}")
            if text in index:
                raise VocabularyError(f"Duplicate label text: {text!r}")
            index[text] = i
        object.__setattr__(self, "_index", index)

    @classmethod
    def from_texts(cls, texts: Iterable[str]) -> "LabelVocabulary":
        """Build a vocabulary in first-appearance order, ignoring repeats."""
        seen: dict[str, None] = {}
        for text in texts:
            seen.setdefault(text, None)
        return cls(tuple(seen))

    @classmethod
    def unlabeled(cls) -> "LabelVocabulary":
        """The sentinel-only vocabulary used for datasets without edge labels."""
        return cls((UNLABELED_EDGE,))

    def __len__(self) -> int:
        return len(self.texts)

    def __iter__(self) -> Iterator[str]:
        return iter(self.texts)

    def __contains__(self, text: object) -> bool:
        return text in self._index

    @property
    def is_unlabeled(self) -> bool:
        """True when the only label is the unlabeled-edge sentinel."""
        return self.texts == (UNLABELED_EDGE,)

    def id_of(self, text: str) -> int:
        """Return the id of a label text."""
        try:
            return self._index[text]
        except KeyError as exc:
            raise VocabularyError(f"Unknown label: {text!r}") from exc

    def text_of(self, label_id: int) -> str:
        """Return the text of a label id."""
        if not 0 <= label_id < len(self.texts):
            raise VocabularyError(f"Label id {label_id} outside vocabulary of {len(self)}")
        return self.texts[label_id]

    def union(self, other: "LabelVocabulary") -> "LabelVocabulary":
        """Labels of self followed by the labels of other not already present."""
        return LabelVocabulary.from_texts((*self.texts, *other.texts))

    def symbol_ranks(self) -> tuple[int, ...]:
        """Rank of every id when labels are ordered by their text."""
        ranks = [0] * len(self.texts)
        for rank, label_id in enumerate(sorted(range(len(self.texts)), key=self.texts.__getitem__)):
            ranks[label_id] = rank
        return tuple(ranks)
