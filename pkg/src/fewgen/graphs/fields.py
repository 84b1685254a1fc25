"""Enumerates per-graph fields that datasets can aggregate over."""

from enum import Enum, auto


class GraphField(Enum):
    """Named per-graph quantities used by dataset statistics."""

    NODES = auto()
    EDGES = auto()
    MAX_DEGREE = auto()
