"""Edge tuples of DFS codes and the gSpan tuple order."""

from __future__ import annotations

from enum import Enum
from typing import NamedTuple, Sequence


class EdgeTuple(NamedTuple):
    """One edge of a DFS code: discovery timestamps and the three labels."""

    t_u: int
    t_v: int
    l_u: int
    l_uv: int
    l_v: int

    @property
    def is_forward(self) -> bool:
        """Forward edges discover a new node (t_u < t_v)."""
        return self.t_u < self.t_v

    @property
    def is_backward(self) -> bool:
        """Backward edges close a cycle to an earlier node (t_u > t_v)."""
        return self.t_u > self.t_v

    def format(self) -> str:
        """Render as `(t_u,t_v,l_u,l_uv,l_v)`."""
        return "(" + ",".join(str(x) for x in self) + ")"


class CodeOrder(Enum):
    """Outcome of comparing two tuples or two codes."""

    LESS = -1
    EQUAL = 0
    GREATER = 1


class LabelOrder(Enum):
    """How label ids are ranked when structure ties."""

    ID = "id"
    SYMBOL = "symbol"


class LabelRanks(NamedTuple):
    """Sort rank per node-label id and per edge-label id."""

    node: Sequence[int]
    edge: Sequence[int]


def _structure_less(a: EdgeTuple, b: EdgeTuple) -> bool:
    if a.is_forward and b.is_forward:
        return a.t_v < b.t_v or (a.t_v == b.t_v and a.t_u > b.t_u)
    if a.is_backward and b.is_backward:
        return a.t_u < b.t_u or (a.t_u == b.t_u and a.t_v < b.t_v)
    if a.is_backward:
        return a.t_u < b.t_v
    return a.t_v <= b.t_u


def _label_key(t: EdgeTuple, ranks: LabelRanks | None) -> tuple[int, int, int]:
    if ranks is None:
        return t.l_u, t.l_uv, t.l_v
    return ranks.node[t.l_u], ranks.edge[t.l_uv], ranks.node[t.l_v]


def compare_tuples(
    a: EdgeTuple,
    b: EdgeTuple,
    ranks: LabelRanks | None = None,
) -> CodeOrder:
    """
    Compare two tuples found at the same position of codes with a common prefix.

    Structure decides first (gSpan order); labels break structural ties, by id or by the
    given ranks.
    """
    if (a.t_u, a.t_v) == (b.t_u, b.t_v):
        key_a = _label_key(a, ranks)
        key_b = _label_key(b, ranks)
        if key_a == key_b:
            return CodeOrder.EQUAL
        return CodeOrder.LESS if key_a < key_b else CodeOrder.GREATER
    return CodeOrder.LESS if _structure_less(a, b) else CodeOrder.GREATER


def compare_codes(
    a: Sequence[EdgeTuple],
    b: Sequence[EdgeTuple],
    ranks: LabelRanks | None = None,
) -> CodeOrder:
    """Lexicographic comparison of tuple sequences; a proper prefix is smaller."""
    for ta, tb in zip(a, b):
        order = compare_tuples(ta, tb, ranks)
        if order is not CodeOrder.EQUAL:
            return order
    if len(a) == len(b):
        return CodeOrder.EQUAL
    return CodeOrder.LESS if len(a) < len(b) else CodeOrder.GREATER
