"""
First-order meta-learning over auxiliary code corpora.

Each meta-iteration samples one auxiliary corpus uniformly, adapts a copy of the parameters
with K plain gradient steps on minibatches of that corpus, and moves the meta-parameters a
fraction epsilon of the way toward the adapted copy.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ..canon.code import DfsCode
from ..canon.corpus import CodeCorpus
from ..errors import ConfigError
from ..model.config import TrainConfig
from ..model.loss import batch_gradient, batch_losses, mean_loss
from ..model.params import ModelParams
from ..model.train import EarlyStopping

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MetaConfig:
    """Inner-loop length, meta step size, inner learning rate and the iteration budget."""

    inner_steps: int = 15
    epsilon: float = 0.8
    inner_lr: float = 0.003
    max_iterations: int = 2000
    validate_every: int = 50
    patience: int = 10
    seed: int = 0

    def __post_init__(self) -> None:
        if self.inner_steps < 1:
            raise ConfigError(f"inner_steps must be >= 1, got {self.inner_steps}")
        if not 0 <= self.epsilon <= 1:
            raise ConfigError(f"epsilon must be in [0, 1], got {self.epsilon}")
        if self.inner_lr <= 0:
            raise ConfigError(f"inner_lr must be > 0, got {self.inner_lr}")
        if self.max_iterations < 0 or self.validate_every < 1 or self.patience < 0:
            raise ConfigError("Invalid meta-iteration budget, cadence or patience")


@dataclass(frozen=True)
class InnerResult:
    """Adapted parameters, the first minibatch loss before and the last one after adapting."""

    params: ModelParams
    start_loss: float
    end_loss: float


def inner_loop(
    theta: ModelParams,
    codes: Sequence[DfsCode],
    k: int,
    lr: float,
    batch_size: int,
    seed: int,
    dropout: float = 0.0,
    reduction: str = "mean",
) -> InnerResult:
    """
    K plain gradient steps from theta on seeded minibatches of `codes`.

    When `batch_size` covers the corpus every step uses all codes in their given order.
    `theta` itself is never modified.
    """
    if not codes:
        raise ValueError("inner_loop needs a nonempty corpus")
    if k < 1:
        raise ValueError(f"inner_loop needs k >= 1, got {k}")
    rng = np.random.default_rng(seed)
    current = theta
    losses: list[float] = []
    for _ in range(k):
        if batch_size >= len(codes):
            batch = list(codes)
        else:
            batch = [codes[i] for i in rng.choice(len(codes), size=batch_size, replace=False)]
        batch_loss, grad = batch_gradient(current, batch, reduction, dropout, rng)
        losses.append(float(batch_loss.mean()))
        current = current.combine(grad, lambda w, g: w - lr * g).ensure_finite()
    end_loss = float(batch_losses(current, batch).mean())
    return InnerResult(current, losses[0], end_loss)


def reptile_update(
    theta: ModelParams,
    theta_k: ModelParams,
    epsilon: float,
) -> ModelParams:
    """Coordinate-wise interpolation theta + epsilon * (theta_k - theta)."""
    return theta.combine(theta_k, lambda a, b: (1.0 - epsilon) * a + epsilon * b)


@dataclass(frozen=True)
class MetaLogEntry:
    """One meta-iteration of the training log."""

    iteration: int
    dataset: str
    start_loss: float
    end_loss: float
    val_loss: float | None = None

    def to_tsv(self) -> str:
        """Tab-separated log line."""
        val = "" if self.val_loss is None else f"{self.val_loss:.8f}"
        return (
            f"{self.iteration}\t{self.dataset}\t{self.start_loss:.8f}\t{self.end_loss:.8f}\t{val}"
        )


@dataclass
class MetaResult:
    """Best-validation meta-parameters and the log."""

    params: ModelParams
    log: list[MetaLogEntry] = field(default_factory=list)

    def log_tsv(self) -> str:
        """The whole log with a header line."""
        lines = ["iteration\tdataset\tinner_start_loss\tinner_end_loss\tval_loss"]
        lines.extend(entry.to_tsv() for entry in self.log)
        return "\n".join(lines) + "\n"


def meta_train(
    corpora: Sequence[CodeCorpus],
    mc: MetaConfig,
    tc: TrainConfig,
    validation: Sequence[CodeCorpus] | None,
    init: ModelParams,
) -> MetaResult:
    """
    Meta-train from `init` until the validation rule fires or the budget runs out.

    Minibatch size, dropout and loss reduction of the inner loop come from `tc`. Validation
    loss is the mean code loss over all validation corpora; without validation corpora the
    final parameters are returned.
    """
    corpora = [c for c in corpora if len(c)]
    if not corpora:
        raise ValueError("meta_train needs at least one nonempty auxiliary corpus")
    val_codes = [code for c in (validation or ()) for code in c.codes]
    rng = np.random.default_rng(mc.seed)
    stop = EarlyStopping(mc.patience, tc.tolerance)
    theta = init.copy()
    best = init.copy()
    result = MetaResult(best)
    for iteration in range(mc.max_iterations):
        corpus = corpora[int(rng.integers(len(corpora)))]
        inner_seed = int(rng.integers(2**63 - 1))
        inner = inner_loop(
            theta,
            corpus.codes,
            mc.inner_steps,
            mc.inner_lr,
            tc.batch_size,
            inner_seed,
            dropout=tc.dropout,
            reduction=tc.loss_reduction,
        )
        theta = reptile_update(theta, inner.params, mc.epsilon).ensure_finite()
        val_loss = None
        if val_codes and (iteration + 1) % mc.validate_every == 0:
            val_loss = mean_loss(theta, val_codes)
            logger.info("meta-iteration %d val_loss=%.6f", iteration, val_loss)
            if stop.update(val_loss):
                best = theta.copy()
        result.log.append(
            MetaLogEntry(iteration, corpus.name, inner.start_loss, inner.end_loss, val_loss)
        )
        if val_loss is not None and stop.should_stop():
            break
    result.params = best if stop.history else theta
    return result
