"""Adam with an L2 term added to the gradient."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import TrainConfig
from .params import ModelParams


@dataclass
class AdamState:
    """First and second moment estimates and the step count."""

    m: ModelParams
    v: ModelParams
    step: int = 0

    @classmethod
    def create(cls, params: ModelParams) -> "AdamState":
        """Zero moments shaped like `params`."""
        return cls(params.zeros_like(), params.zeros_like(), 0)


def adam_step(
    params: ModelParams,
    grad: ModelParams,
    state: AdamState,
    cfg: TrainConfig,
) -> tuple[ModelParams, AdamState]:
    """
    One bias-corrected Adam update on grad + l2 * params.

    Neither input is modified; new parameters and a new state are returned.
    """
    grad.ensure_finite("gradient")
    params.check_compatible(grad)
    step = state.step + 1
    correction1 = 1.0 - cfg.beta1 ** step
    correction2 = 1.0 - cfg.beta2 ** step
    new_params: dict = {}
    new_m: dict = {}
    new_v: dict = {}
    for name, weight in params.tensors.items():
        g = grad[name] + cfg.l2 * weight if cfg.l2 else grad[name]
        m = cfg.beta1 * state.m[name] + (1.0 - cfg.beta1) * g
        v = cfg.beta2 * state.v[name] + (1.0 - cfg.beta2) * g * g
        m_hat = m / correction1
        v_hat = v / correction2
        new_params[name] = weight - cfg.lr * m_hat / (np.sqrt(v_hat) + cfg.adam_eps)
        new_m[name] = m
        new_v[name] = v
    updated = ModelParams(params.config, params.vocab, new_params).ensure_finite()
    return updated, AdamState(
        ModelParams(params.config, params.vocab, new_m),
        ModelParams(params.config, params.vocab, new_v),
        step,
    )
