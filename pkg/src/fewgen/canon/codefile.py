"""Code dump text: one code per line, tuples as `(t_u,t_v,l_u,l_uv,l_v)`."""

from __future__ import annotations

import re
from typing import Final, Iterable

from ..errors import GraphFormatError
from .code import DfsCode
from .tuples import EdgeTuple

_TUPLE: Final = re.compile(r"\((-?\d+),(-?\d+),(-?\d+),(-?\d+),(-?\d+)\)")


def write_code_dump(codes: Iterable[DfsCode]) -> str:
    """Render codes one per line."""
    return "".join(code.format() + "\n" for code in codes)


def read_code_dump(text: str) -> list[DfsCode]:
    """Parse a code dump; blank lines are skipped."""
    codes: list[DfsCode] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        tokens = line.split()
        if not tokens:
            continue
        tuples = []
        for token in tokens:
            match = _TUPLE.fullmatch(token)
            if match is None:
                raise GraphFormatError(f"malformed tuple {token!r}", lineno)
            tuples.append(EdgeTuple(*(int(x) for x in match.groups())))
        codes.append(DfsCode(tuple(tuples)))
    return codes
