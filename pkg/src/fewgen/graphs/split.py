"""Seeded train/validation/test partitioning of datasets."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ..errors import ConfigError
from .dataset import GraphDataset

logger = logging.getLogger(__name__)


def _as_fraction(value: Fraction | float | int | str) -> Fraction:
    if isinstance(value, Fraction):
        return value
    # str() keeps the decimal the caller wrote: 0.3 -> 3/10, not the binary float.
    return Fraction(str(value))


@dataclass(frozen=True)
class SplitSpec:
    """Fractions of a three-way split and the shuffle seed."""

    train: Fraction = Fraction(2, 5)
    validation: Fraction = Fraction(3, 10)
    test: Fraction = Fraction(3, 10)
    seed: int = 0

    def __post_init__(self) -> None:
        for name in ("train", "validation", "test"):
            value = _as_fraction(getattr(self, name))
            if not 0 <= value <= 1:
                raise ConfigError(f"Split fraction {name}={value} outside [0, 1]")
            object.__setattr__(self, name, value)
        total = self.train + self.validation + self.test
        if total != 1:
            raise ConfigError(f"Split fractions sum to {total}, expected 1")

    @classmethod
    def halves(cls, seed: int = 0) -> "SplitSpec":
        """50/50 train/validation split used for auxiliary datasets."""
        return cls(Fraction(1, 2), Fraction(1, 2), Fraction(0), seed)


def split_dataset(
    d: GraphDataset,
    spec: SplitSpec,
) -> tuple[GraphDataset, GraphDataset, GraphDataset]:
    """
    Partition a dataset by seeded shuffle.

    Validation and test sizes are floor(N * fraction); the remainder goes to train.
    """
    n = len(d)
    n_val = math.floor(n * spec.validation)
    n_test = math.floor(n * spec.test)
    n_train = n - n_val - n_test
    order = np.random.default_rng(spec.seed).permutation(n).tolist()
    train = d.subset(order[:n_train], name=f"{d.name}-train")
    validation = d.subset(order[n_train:n_train + n_val], name=f"{d.name}-val")
    test = d.subset(order[n_train + n_val:], name=f"{d.name}-test")
    for part, fraction in ((train, spec.train), (validation, spec.validation), (test, spec.test)):
        if fraction and not len(part):
            logger.warning("Split of %r produced an empty partition %r", d.name, part.name)
    return train, validation, test
