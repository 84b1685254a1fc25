"""Generation settings."""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..canon.repair import RepairMode
from ..errors import ConfigError
from ..graphs.dataset import GraphDataset
from ..graphs.fields import GraphField

GENERATION_PRESETS: dict[str, int] = {
    "large": 2560,
    "medium": 1024,
    "small": 512,
}

BUDGET_FACTOR = 10


@dataclass(frozen=True)
class GenerationConfig:
    """
    How many graphs to sample and how.

    Properties:
        count: Graphs requested.
        max_tuples: Hard cap on the sampled sequence length; None uses the largest simple
            graph the vocabulary's timestamps allow.
        temperature: Softmax temperature applied to every head.
        repair: Policy for sequences that are not valid codes.
        seed: Root seed of all chains.
        chains: Independent sampling chains.
    """

    count: int = 1024
    max_tuples: int | None = None
    temperature: float = 1.0
    repair: RepairMode = RepairMode.STRICT
    seed: int = 0
    chains: int = 1

    def __post_init__(self) -> None:
        if self.count < 1:
            raise ConfigError(f"count must be >= 1, got {self.count}")
        if self.max_tuples is not None and self.max_tuples < 1:
            raise ConfigError(f"max_tuples must be >= 1, got {self.max_tuples}")
        if self.temperature <= 0:
            raise ConfigError(f"temperature must be > 0, got {self.temperature}")
        if self.chains < 1:
            raise ConfigError(f"chains must be >= 1, got {self.chains}")
        if isinstance(self.repair, str):
            object.__setattr__(self, "repair", RepairMode(self.repair))

    @classmethod
    def from_preset(cls, preset: str, **kwargs) -> "GenerationConfig":
        """Config with the graph count of a named preset."""
        try:
            count = GENERATION_PRESETS[preset]
        except KeyError as exc:
            raise ConfigError(
                f"Unknown preset {preset!r}, expected one of {sorted(GENERATION_PRESETS)}"
            ) from exc
        return cls(count=count, **kwargs)


def default_max_tuples(train: GraphDataset) -> int:
    """ceil(1.5 * the largest edge count of the training graphs)."""
    largest = train.max(GraphField.EDGES)
    if largest is None:
        raise ConfigError("Cannot derive max_tuples from an empty dataset")
    return math.ceil(1.5 * largest)
