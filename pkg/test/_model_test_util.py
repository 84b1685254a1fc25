"""Hand-built model parameters shared by the model, sampling and fine-tuning tests."""

import numpy as np

from fewgen.canon import EdgeTuple
from fewgen.model import ModelConfig, ModelParams, Vocabulary
from fewgen.model.vocabulary import COMPONENTS

# logit gap of the point-mass heads; exp(-GAP) underflows every competing probability
GAP = 200.0


def point_mass_params(v: Vocabulary, target: EdgeTuple) -> ModelParams:
    """
    Width-1 model that emits `target` at the first step and EOS at the second.

    The first input is all zeros, so the hidden state is exactly 0; any one-hot tuple input
    drives it to tanh(tanh(5)), which switches the head hidden unit off.
    """
    params = ModelParams.zeros(ModelConfig(1, 1, 1, 1), v)
    t = params.tensors
    t["embed.W"][:, 0] = 1.0
    # gate order input, forget, output, candidate; only the candidate reads the input
    t["lstm0.W"][0, 3] = 1.0
    t["lstm0.b"][:] = [50.0, -50.0, 50.0, 0.0]
    for name, index, eos in zip(COMPONENTS, target, v.eos):
        t[f"{name}.W1"][0, 0] = -1.0
        t[f"{name}.b1"][0] = 0.5
        t[f"{name}.W2"][0, index] = 4.0 * GAP
        t[f"{name}.b2"][eos] = GAP
    return params


def eos_params(v: Vocabulary) -> ModelParams:
    """Zero model whose t_u head puts all mass on EOS."""
    params = ModelParams.zeros(ModelConfig(2, 2, 2, 1), v)
    params.tensors["t_u.b2"][v.eos[0]] = GAP
    return params


def tiny_params(v: Vocabulary, seed: int = 0, width: int = 4) -> ModelParams:
    """Randomly initialized width-`width` model."""
    return ModelParams.initialize(ModelConfig(width, width, width, 1), v, seed)


def with_tensor(params: ModelParams, name: str, index: tuple, delta: float) -> ModelParams:
    """Copy of `params` with one coordinate shifted by `delta`."""
    shifted = params.copy()
    shifted.tensors[name][index] += delta
    return shifted


def uniform_step_loss(sizes: tuple[int, ...]) -> float:
    """BCE of uniform heads against one-hot targets, summed over the five components."""
    return sum(-np.log(1.0 / n) - (n - 1) * np.log(1.0 - 1.0 / n) for n in sizes)
