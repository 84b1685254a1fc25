"""Type aliases shared across fewgen."""

from __future__ import annotations

import pathlib
from typing import Sequence, TypeAlias

import numpy as np
import numpy.typing as npt

# (u, v, edge-label id) with u < v
Edge: TypeAlias = tuple[int, int, int]
EdgeList: TypeAlias = Sequence[Edge]
NodeLabels: TypeAlias = Sequence[int]
Permutation: TypeAlias = Sequence[int]

FloatArray: TypeAlias = npt.NDArray[np.float64]
IntArray: TypeAlias = npt.NDArray[np.int64]
BoolArray: TypeAlias = npt.NDArray[np.bool_]

StrOrPath: TypeAlias = str | pathlib.Path
StrPathOrListOfStrPath: TypeAlias = StrOrPath | Sequence[StrOrPath]
