"""Turning raw sampled tuple sequences into valid DFS codes."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Sequence

from .code import CodeRule, CodeWalker, DfsCode
from .tuples import EdgeTuple


class RepairMode(Enum):
    """Policy for invalid sequences."""

    STRICT = "strict"
    LENIENT = "lenient"


class RepairRule(Enum):
    """What `repair_code` did to a sequence."""

    DROPPED_DUPLICATE = "dropped-duplicate"
    TRUNCATED = "truncated"


@dataclass(frozen=True)
class RepairResult:
    """A repaired code, or a rejection with its reason."""

    code: DfsCode | None
    rules_fired: tuple[RepairRule, ...] = ()
    reason: str | None = None

    @property
    def accepted(self) -> bool:
        """True when a code survived."""
        return self.code is not None


def repair_code(
    s: Sequence[EdgeTuple],
    mode: RepairMode = RepairMode.STRICT,
) -> RepairResult:
    """
    Validate a raw sequence as a DFS code.

    Strict mode rejects on the first violated rule. Lenient mode drops tuples that repeat an
    existing edge and cuts the sequence at the first other violation; at least one tuple must
    survive.
    """
    if not s:
        return RepairResult(None, reason="empty")
    walker = CodeWalker()
    kept: list[EdgeTuple] = []
    fired: list[RepairRule] = []
    for t in s:
        t = EdgeTuple(*t)
        rule = walker.check(t)
        if rule is None:
            walker.push(t)
            kept.append(t)
            continue
        if mode is RepairMode.STRICT:
            return RepairResult(None, reason=rule.name.lower())
        if rule is CodeRule.DUPLICATE_EDGE:
            fired.append(RepairRule.DROPPED_DUPLICATE)
            continue
        fired.append(RepairRule.TRUNCATED)
        if not kept:
            return RepairResult(None, tuple(fired), reason=rule.name.lower())
        break
    return RepairResult(DfsCode(tuple(kept)), tuple(fired))
