"""Sequence losses and gradients over DFS codes."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from ..canon.code import DfsCode
from ..graphs.alias import FloatArray, IntArray
from .network import evaluate_batch
from ..errors import VocabularyError
from .params import ModelParams
from .vocabulary import Vocabulary


def _check_vocabulary(params: ModelParams, v: Vocabulary | None) -> None:
    if v is not None and v != params.vocab:
        raise VocabularyError("Vocabulary differs from the model vocabulary")


def encode_codes(params: ModelParams, codes: Sequence[DfsCode]) -> list[IntArray]:
    """Target index arrays of codes under the model vocabulary."""
    return [params.vocab.code_indices(code) for code in codes]


def sequence_loss(
    params: ModelParams,
    s: DfsCode,
    v: Vocabulary | None = None,
) -> float:
    """Teacher-forced binary cross-entropy of one code over its m + 1 steps."""
    _check_vocabulary(params, v)
    return float(batch_losses(params, [s.validate()])[0])


def sequence_grad(
    params: ModelParams,
    s: DfsCode,
    v: Vocabulary | None = None,
) -> ModelParams:
    """Exact gradient of `sequence_loss`, dropout disabled."""
    _check_vocabulary(params, v)
    result = evaluate_batch(params, encode_codes(params, [s.validate()]), need_grad=True)
    assert result.grad is not None
    return result.grad


def batch_losses(params: ModelParams, codes: Sequence[DfsCode]) -> FloatArray:
    """Per-code losses in evaluation mode."""
    if not codes:
        return np.zeros(0)
    return evaluate_batch(params, encode_codes(params, codes)).losses


def mean_loss(
    params: ModelParams,
    codes: Sequence[DfsCode],
    batch_size: int = 64,
) -> float:
    """Mean per-code loss in evaluation mode, evaluated in chunks."""
    if not codes:
        raise ValueError("mean_loss needs at least one code")
    total = 0.0
    for start in range(0, len(codes), batch_size):
        total += float(batch_losses(params, codes[start:start + batch_size]).sum())
    return total / len(codes)


def batch_gradient(
    params: ModelParams,
    codes: Sequence[DfsCode],
    reduction: str = "mean",
    dropout: float = 0.0,
    rng: np.random.Generator | None = None,
) -> tuple[FloatArray, ModelParams]:
    """
    Per-code losses and the gradient of the batch loss.

    The batch loss is the sum of code losses, scaled by 1 / len(codes) for `"mean"`.
    """
    scale = 1.0 / len(codes) if reduction == "mean" else 1.0
    result = evaluate_batch(
        params,
        encode_codes(params, codes),
        weights=np.full(len(codes), scale),
        need_grad=True,
        dropout=dropout,
        rng=rng,
    )
    assert result.grad is not None
    return result.losses, result.grad
