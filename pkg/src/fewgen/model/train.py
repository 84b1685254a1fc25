"""Minibatch Adam training with validation-based early stopping."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ..canon.code import DfsCode
from .config import TrainConfig
from .loss import batch_gradient, mean_loss
from .optim import AdamState, adam_step
from .params import ModelParams

logger = logging.getLogger(__name__)


@dataclass
class EarlyStopping:
    """
    Tracks validation losses and decides when to stop.

    Training stops once `patience` evaluations pass without a new best, or when the loss has
    changed by less than `tolerance` (relative) across the last patience window.
    """

    patience: int
    tolerance: float
    history: list[float] = field(default_factory=list)
    best: float = math.inf
    best_index: int = -1

    def update(self, value: float) -> bool:
        """Record a validation loss; True when it is a new best."""
        self.history.append(value)
        if value < self.best:
            self.best = value
            self.best_index = len(self.history) - 1
            return True
        return False

    @property
    def since_best(self) -> int:
        """Evaluations since the best one."""
        return len(self.history) - 1 - self.best_index

    def should_stop(self) -> bool:
        """Apply both stopping rules to the history so far."""
        if self.since_best >= self.patience:
            return True
        if self.patience and len(self.history) > self.patience:
            old = self.history[-1 - self.patience]
            if abs(self.history[-1] - old) < self.tolerance * abs(old):
                logger.info("Validation loss flat over %d evaluations", self.patience)
                return True
        return False


@dataclass(frozen=True)
class EpochRecord:
    """Mean training loss and validation loss of one epoch."""

    epoch: int
    train_loss: float
    val_loss: float


@dataclass
class TrainResult:
    """Best-validation parameters and the per-epoch history."""

    params: ModelParams
    history: list[EpochRecord]
    steps: int = 0

    def history_tsv(self) -> str:
        """Per-epoch losses with a header line."""
        return history_tsv(self.history)


def history_tsv(records: Sequence[EpochRecord]) -> str:
    """Tab-separated epoch, train loss and validation loss, with a header line."""
    lines = ["epoch\ttrain_loss\tval_loss"]
    lines.extend(f"{r.epoch}\t{r.train_loss:.8f}\t{r.val_loss:.8f}" for r in records)
    return "\n".join(lines) + "\n"


def iterate_batches(
    n: int,
    batch_size: int,
    rng: np.random.Generator,
) -> list[list[int]]:
    """One epoch of shuffled index batches."""
    order = rng.permutation(n).tolist()
    return [order[i:i + batch_size] for i in range(0, n, batch_size)]


def train_epochs(
    params: ModelParams,
    codes: Sequence[DfsCode],
    cfg: TrainConfig,
    validation: Sequence[DfsCode] | None = None,
    stop: EarlyStopping | None = None,
) -> TrainResult:
    """
    Train with Adam on shuffled minibatches until the stopping rule fires.

    Without validation codes the training codes are scored in evaluation mode instead.
    """
    if not codes:
        raise ValueError("train_epochs needs at least one training code")
    stop = stop or EarlyStopping(cfg.patience, cfg.tolerance)
    monitor = validation if validation else codes
    rng = np.random.default_rng(cfg.seed)
    state = AdamState.create(params)
    current = params.copy()
    best = params.copy()
    history: list[EpochRecord] = []
    for epoch in range(cfg.max_epochs):
        batch_means = []
        for batch in iterate_batches(len(codes), cfg.batch_size, rng):
            losses, grad = batch_gradient(
                current,
                [codes[i] for i in batch],
                reduction=cfg.loss_reduction,
                dropout=cfg.dropout,
                rng=rng,
            )
            current, state = adam_step(current, grad, state, cfg)
            batch_means.append(float(losses.mean()))
        val_loss = mean_loss(current, monitor)
        record = EpochRecord(epoch, float(np.mean(batch_means)), val_loss)
        history.append(record)
        logger.info(
            "epoch %d train_loss=%.6f val_loss=%.6f", epoch, record.train_loss, val_loss
        )
        if stop.update(val_loss):
            best = current.copy()
        if stop.should_stop():
            break
    return TrainResult(best, history, state.step)
