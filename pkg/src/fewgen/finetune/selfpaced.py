"""
Self-paced fine-tuning on the target dataset.

Within every minibatch only the codes whose current loss is below a threshold lambda take part
in the update; lambda grows geometrically per batch so harder codes join as training proceeds.
With every code selected, a step is identical to the vanilla fine-tuning step.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ..canon.code import DfsCode
from ..errors import ConfigError
from ..graphs.alias import BoolArray, FloatArray
from ..model.config import TrainConfig
from ..model.loss import batch_gradient, batch_losses, mean_loss
from ..model.optim import AdamState, adam_step
from ..model.params import ModelParams
from ..model.train import EarlyStopping, EpochRecord, history_tsv, iterate_batches

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SelfPacedConfig:
    """
    Pace schedule plus the optimizer settings of fine-tuning.

    Properties:
        lambda0: Initial threshold; None takes the `lambda_quantile` quantile of the initial
            per-code losses of the training codes.
        growth: Per-batch multiplier of the threshold, at least 1.
        train: Learning rate, batch size, dropout and stopping rule.
    """

    lambda0: float | None = None
    lambda_quantile: float = 0.25
    growth: float = 1.001
    train: TrainConfig = field(default_factory=TrainConfig)

    def __post_init__(self) -> None:
        if self.lambda0 is not None and self.lambda0 <= 0:
            raise ConfigError(f"lambda0 must be > 0, got {self.lambda0}")
        if not 0 <= self.lambda_quantile <= 1:
            raise ConfigError(f"lambda_quantile must be in [0, 1], got {self.lambda_quantile}")
        if self.growth < 1:
            raise ConfigError(f"growth must be >= 1, got {self.growth}")


def select_samples(losses: FloatArray, lam: float) -> BoolArray:
    """beta_i = 1 exactly when loss_i < lambda."""
    return np.asarray(losses) < lam


def pace_threshold(
    lambda0: float,
    growth: float,
    batch_index: int,
) -> float:
    """Threshold of the given zero-based batch counter."""
    return lambda0 * growth**batch_index


def initial_threshold(
    params: ModelParams,
    codes: Sequence[DfsCode],
    quantile: float = 0.25,
    batch_size: int = 64,
) -> float:
    """Quantile of the per-code losses under `params`."""
    losses = np.concatenate(
        [batch_losses(params, codes[i:i + batch_size]) for i in range(0, len(codes), batch_size)]
    )
    return float(np.quantile(losses, quantile))


@dataclass
class StepResult:
    """Parameters and optimizer state after one minibatch."""

    params: ModelParams
    state: AdamState
    selected: int
    batch_loss: float


def _weighted_step(
    params: ModelParams,
    codes: Sequence[DfsCode],
    state: AdamState,
    cfg: TrainConfig,
    rng: np.random.Generator,
) -> tuple[ModelParams, AdamState]:
    _, grad = batch_gradient(params, codes, cfg.loss_reduction, cfg.dropout, rng)
    return adam_step(params, grad, state, cfg)


def vanilla_batch_step(
    params: ModelParams,
    codes: Sequence[DfsCode],
    state: AdamState,
    cfg: TrainConfig,
    rng: np.random.Generator,
) -> StepResult:
    """One Adam step on every code of the minibatch."""
    losses = batch_losses(params, codes)
    new_params, new_state = _weighted_step(params, codes, state, cfg, rng)
    return StepResult(new_params, new_state, len(codes), float(losses.mean()))


def self_paced_batch_step(
    params: ModelParams,
    codes: Sequence[DfsCode],
    lam: float,
    state: AdamState,
    cfg: TrainConfig,
    rng: np.random.Generator,
) -> StepResult:
    """
    One Adam step on the codes of the minibatch whose evaluation-mode loss is below `lam`.

    Selection weights are constants of the step. When nothing is selected the parameters and
    the optimizer state are returned unchanged.
    """
    losses = batch_losses(params, codes)
    beta = select_samples(losses, lam)
    chosen = [code for code, keep in zip(codes, beta) if keep]
    if not chosen:
        return StepResult(params, state, 0, float(losses.mean()))
    new_params, new_state = _weighted_step(params, chosen, state, cfg, rng)
    return StepResult(new_params, new_state, len(chosen), float(losses.mean()))


@dataclass(frozen=True)
class BatchLogEntry:
    """Threshold and selection count of one minibatch."""

    epoch: int
    batch: int
    lam: float | None
    selected: int
    size: int
    batch_loss: float

    def to_tsv(self) -> str:
        """Tab-separated log line."""
        lam = "" if self.lam is None else f"{self.lam:.8f}"
        return (
            f"{self.epoch}\t{self.batch}\t{lam}\t{self.selected}\t{self.size}"
            f"\t{self.batch_loss:.8f}"
        )


@dataclass
class FineTuneResult:
    """Best-validation parameters, the per-batch log and the per-epoch history."""

    params: ModelParams
    lambda0: float | None
    batches: list[BatchLogEntry] = field(default_factory=list)
    history: list[EpochRecord] = field(default_factory=list)
    steps: int = 0

    def log_tsv(self) -> str:
        """Per-batch log with a header line."""
        lines = ["epoch\tbatch\tlambda\tselected\tbatch_size\tbatch_loss"]
        lines.extend(entry.to_tsv() for entry in self.batches)
        return "\n".join(lines) + "\n"

    def history_tsv(self) -> str:
        """Per-epoch losses with a header line."""
        return history_tsv(self.history)


def _fine_tune_loop(
    params: ModelParams,
    codes: Sequence[DfsCode],
    cfg: TrainConfig,
    validation: Sequence[DfsCode] | None,
    lambda0: float | None,
    growth: float,
) -> FineTuneResult:
    if not codes:
        raise ValueError("Fine-tuning needs at least one training code")
    monitor = validation if validation else codes
    rng = np.random.default_rng(cfg.seed)
    stop = EarlyStopping(cfg.patience, cfg.tolerance)
    state = AdamState.create(params)
    current = params.copy()
    result = FineTuneResult(params.copy(), lambda0)
    counter = 0
    for epoch in range(cfg.max_epochs):
        batch_means = []
        for index, batch in enumerate(iterate_batches(len(codes), cfg.batch_size, rng)):
            batch_codes = [codes[i] for i in batch]
            if lambda0 is None:
                lam = None
                step = vanilla_batch_step(current, batch_codes, state, cfg, rng)
            else:
                lam = pace_threshold(lambda0, growth, counter)
                step = self_paced_batch_step(current, batch_codes, lam, state, cfg, rng)
            current, state = step.params, step.state
            batch_means.append(step.batch_loss)
            result.batches.append(
                BatchLogEntry(epoch, index, lam, step.selected, len(batch_codes), step.batch_loss)
            )
            counter += 1
        val_loss = mean_loss(current, monitor)
        record = EpochRecord(epoch, float(np.mean(batch_means)), val_loss)
        result.history.append(record)
        logger.info("epoch %d train_loss=%.6f val_loss=%.6f", epoch, record.train_loss, val_loss)
        if stop.update(val_loss):
            result.params = current.copy()
        if stop.should_stop():
            break
    result.steps = state.step
    return result


def fine_tune(
    params: ModelParams,
    codes: Sequence[DfsCode],
    spc: SelfPacedConfig,
    validation: Sequence[DfsCode] | None = None,
) -> FineTuneResult:
    """Self-paced fine-tuning from `params` until the stopping rule fires."""
    lambda0 = spc.lambda0
    if lambda0 is None:
        lambda0 = initial_threshold(params, codes, spc.lambda_quantile)
        logger.info("Initial pace threshold %.6f", lambda0)
    return _fine_tune_loop(params, codes, spc.train, validation, lambda0, spc.growth)


def vanilla_fine_tune(
    params: ModelParams,
    codes: Sequence[DfsCode],
    cfg: TrainConfig,
    validation: Sequence[DfsCode] | None = None,
) -> FineTuneResult:
    """Fine-tuning on every code, same batching, random streams and stopping rule."""
    return _fine_tune_loop(params, codes, cfg, validation, None, 1.0)
