"""DFS codes and their validity rules."""

from __future__ import annotations

import functools
from dataclasses import dataclass
from enum import Enum, auto
from typing import Iterator, NamedTuple, Sequence

from ..errors import InvalidCodeError
from .tuples import CodeOrder, EdgeTuple, compare_codes


class CodeRule(Enum):
    """A DFS-code validity rule that a tuple can break."""

    FIRST_EDGE = auto()
    SELF_LOOP = auto()
    TIMESTAMP_GAP = auto()
    NOT_ON_RIGHTMOST_PATH = auto()
    BACKWARD_SOURCE = auto()
    BACKWARD_ORDER = auto()
    LABEL_CONFLICT = auto()
    DUPLICATE_EDGE = auto()


class Violation(NamedTuple):
    """The first broken rule of a tuple at a given position."""

    index: int
    rule: CodeRule


@functools.total_ordering
@dataclass(frozen=True)
class DfsCode:
    """An immutable sequence of edge tuples, ordered lexicographically by tuple order."""

    tuples: tuple[EdgeTuple, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "tuples", tuple(EdgeTuple(*t) for t in self.tuples))

    def __len__(self) -> int:
        return len(self.tuples)

    def __iter__(self) -> Iterator[EdgeTuple]:
        return iter(self.tuples)

    def __getitem__(self, index: int) -> EdgeTuple:
        return self.tuples[index]

    def __lt__(self, other: "DfsCode") -> bool:
        return compare_codes(self.tuples, other.tuples) is CodeOrder.LESS

    @property
    def num_nodes(self) -> int:
        """Number of distinct timestamps."""
        if not self.tuples:
            return 0
        return 1 + max(max(t.t_u, t.t_v) for t in self.tuples)

    def format(self) -> str:
        """One line, tuples space-separated."""
        return " ".join(t.format() for t in self.tuples)

    def validate(self) -> "DfsCode":
        """Raise InvalidCodeError on the first violated rule; return self otherwise."""
        violation = first_violation(self.tuples)
        if violation is not None:
            raise InvalidCodeError(
                f"Tuple {violation.index} breaks rule {violation.rule.name.lower()}"
            )
        return self


class CodeWalker:
    """
    Tracks the DFS state implied by a code prefix.

    The walker knows the introduced timestamps with their labels, the rightmost path and the
    edges already present, so it can judge whether a next tuple extends the prefix validly.
    """

    def __init__(self) -> None:
        self.labels: list[int] = []
        self.path: list[int] = []
        self.edges: set[tuple[int, int]] = set()
        self.previous: EdgeTuple | None = None

    def check(self, t: EdgeTuple) -> CodeRule | None:
        """The rule `t` would break as the next tuple, or None."""
        if not self.labels:
            if (t.t_u, t.t_v) != (0, 1):
                return CodeRule.FIRST_EDGE
            return None
        if t.t_u == t.t_v:
            return CodeRule.SELF_LOOP
        n = len(self.labels)
        if t.t_u >= n or (t.is_backward and t.t_v >= n) or (t.is_forward and t.t_v > n):
            return CodeRule.TIMESTAMP_GAP
        if t.is_forward and t.t_v != n:
            # a forward tuple between two known nodes
            if self._key(t) in self.edges:
                return CodeRule.DUPLICATE_EDGE
            return CodeRule.BACKWARD_SOURCE
        if self.labels[t.t_u] != t.l_u:
            return CodeRule.LABEL_CONFLICT
        if t.is_backward and self.labels[t.t_v] != t.l_v:
            return CodeRule.LABEL_CONFLICT
        if self._key(t) in self.edges:
            return CodeRule.DUPLICATE_EDGE
        if t.is_forward:
            if t.t_u not in self.path:
                return CodeRule.NOT_ON_RIGHTMOST_PATH
            return None
        if t.t_u != n - 1 or t.t_v not in self.path:
            return CodeRule.BACKWARD_SOURCE
        prev = self.previous
        if prev is not None and prev.is_backward and prev.t_u == t.t_u and prev.t_v >= t.t_v:
            return CodeRule.BACKWARD_ORDER
        if prev is not None and prev.is_forward and prev.t_v != t.t_u:
            return CodeRule.BACKWARD_ORDER
        return None

    def push(self, t: EdgeTuple) -> None:
        """Append a tuple that passed `check`."""
        if not self.labels:
            self.labels.extend((t.l_u, t.l_v))
            self.path = [0, 1]
        elif t.is_forward:
            self.labels.append(t.l_v)
            del self.path[self.path.index(t.t_u) + 1:]
            self.path.append(t.t_v)
        self.edges.add(self._key(t))
        self.previous = t

    @staticmethod
    def _key(t: EdgeTuple) -> tuple[int, int]:
        return min(t.t_u, t.t_v), max(t.t_u, t.t_v)


def first_violation(tuples: Sequence[EdgeTuple]) -> Violation | None:
    """The first tuple that does not extend its prefix to a valid DFS code."""
    walker = CodeWalker()
    for index, t in enumerate(tuples):
        rule = walker.check(t)
        if rule is not None:
            return Violation(index, rule)
        walker.push(t)
    return None
