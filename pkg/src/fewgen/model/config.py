"""Optimizer and stopping configuration for supervised training."""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import ConfigError

REDUCTIONS = ("mean", "sum")


@dataclass(frozen=True)
class TrainConfig:
    """
    Adam training settings.

    `tolerance` is the relative validation-loss change below which training stops once a
    full patience window has passed; `patience` counts epochs without a new best.
    """

    lr: float = 0.003
    batch_size: int = 32
    dropout: float = 0.2
    l2: float = 1e-5
    beta1: float = 0.9
    beta2: float = 0.999
    adam_eps: float = 1e-8
    tolerance: float = 0.0005
    patience: int = 10
    max_epochs: int = 1000
    loss_reduction: str = "mean"
    seed: int = 0

    def __post_init__(self) -> None:
        if self.lr <= 0:
            raise ConfigError(f"lr must be > 0, got {self.lr}")
        if self.batch_size < 1:
            raise ConfigError(f"batch_size must be >= 1, got {self.batch_size}")
        if not 0 <= self.dropout < 1:
            raise ConfigError(f"dropout must be in [0, 1), got {self.dropout}")
        if self.l2 < 0 or self.tolerance < 0 or self.patience < 0 or self.max_epochs < 0:
            raise ConfigError("l2, tolerance, patience and max_epochs must be >= 0")
        if not (0 <= self.beta1 < 1 and 0 <= self.beta2 < 1 and self.adam_eps > 0):
            raise ConfigError("Adam decay rates must be in [0, 1) and adam_eps > 0")
        if self.loss_reduction not in REDUCTIONS:
            raise ConfigError(f"loss_reduction must be one of {REDUCTIONS}")
