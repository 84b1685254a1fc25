"""Model dimensions and the named parameter tensors of the sequence model."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator

import numpy as np

from ..errors import ConfigError, NumericalError
from ..graphs.alias import FloatArray
from .vocabulary import COMPONENTS, Vocabulary


@dataclass(frozen=True)
class ModelConfig:
    """Widths of the embedding, the recurrent layers and the head hidden layers."""

    embed_dim: int = 128
    hidden_dim: int = 256
    head_dim: int = 512
    num_layers: int = 1

    def __post_init__(self) -> None:
        if min(self.embed_dim, self.hidden_dim, self.head_dim, self.num_layers) < 1:
            raise ConfigError(f"Model dimensions must be positive: {self}")


def tensor_shapes(cfg: ModelConfig, v: Vocabulary) -> dict[str, tuple[int, ...]]:
    """Name and shape of every parameter tensor, in canonical order."""
    shapes: dict[str, tuple[int, ...]] = {
        "embed.W": (v.total_size, cfg.embed_dim),
        "embed.b": (cfg.embed_dim,),
    }
    for layer in range(cfg.num_layers):
        width_in = cfg.embed_dim if layer == 0 else cfg.hidden_dim
        shapes[f"lstm{layer}.W"] = (width_in + cfg.hidden_dim, 4 * cfg.hidden_dim)
        shapes[f"lstm{layer}.b"] = (4 * cfg.hidden_dim,)
    for name, size in zip(COMPONENTS, v.sizes):
        shapes[f"{name}.W1"] = (cfg.hidden_dim, cfg.head_dim)
        shapes[f"{name}.b1"] = (cfg.head_dim,)
        shapes[f"{name}.W2"] = (cfg.head_dim, size)
        shapes[f"{name}.b2"] = (size,)
    return shapes


@dataclass
class ModelParams:
    """
    The parameter vector theta as named float64 tensors.

    Gradients and optimizer moments use the same type. Arithmetic works tensor by tensor and
    never mutates its operands.
    """

    config: ModelConfig
    vocab: Vocabulary
    tensors: dict[str, FloatArray]

    @classmethod
    def initialize(
        cls,
        config: ModelConfig,
        vocab: Vocabulary,
        seed: int = 0,
    ) -> "ModelParams":
        """Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) weights and zero biases."""
        rng = np.random.default_rng(seed)
        tensors: dict[str, FloatArray] = {}
        for name, shape in tensor_shapes(config, vocab).items():
            if len(shape) == 1:
                tensors[name] = np.zeros(shape, dtype=np.float64)
            else:
                bound = 1.0 / np.sqrt(shape[0])
                tensors[name] = rng.uniform(-bound, bound, size=shape)
        return cls(config, vocab, tensors)

    @classmethod
    def zeros(cls, config: ModelConfig, vocab: Vocabulary) -> "ModelParams":
        """All-zero parameters."""
        shapes = tensor_shapes(config, vocab)
        return cls(config, vocab, {n: np.zeros(s, dtype=np.float64) for n, s in shapes.items()})

    def __iter__(self) -> Iterator[str]:
        return iter(self.tensors)

    def __getitem__(self, name: str) -> FloatArray:
        return self.tensors[name]

    def zeros_like(self) -> "ModelParams":
        """Zero tensors of the same shapes."""
        return self.map(np.zeros_like)

    def copy(self) -> "ModelParams":
        """Deep copy."""
        return self.map(np.copy)

    def map(self, func: Callable[[FloatArray], FloatArray]) -> "ModelParams":
        """Apply a function to every tensor."""
        return ModelParams(self.config, self.vocab, {n: func(t) for n, t in self.tensors.items()})

    def combine(
        self,
        other: "ModelParams",
        func: Callable[[FloatArray, FloatArray], FloatArray],
    ) -> "ModelParams":
        """Apply a binary function tensor-wise; shapes must agree."""
        self.check_compatible(other)
        return ModelParams(
            self.config,
            self.vocab,
            {n: func(t, other.tensors[n]) for n, t in self.tensors.items()},
        )

    def check_compatible(self, other: "ModelParams") -> None:
        """Raise ValueError unless both hold the same names and shapes."""
        if self.tensors.keys() != other.tensors.keys() or any(
            t.shape != other.tensors[n].shape for n, t in self.tensors.items()
        ):
            raise ValueError("Parameter sets have different shapes")

    def __add__(self, other: "ModelParams") -> "ModelParams":
        return self.combine(other, np.add)

    def __sub__(self, other: "ModelParams") -> "ModelParams":
        return self.combine(other, np.subtract)

    def __mul__(self, scalar: float) -> "ModelParams":
        return self.map(lambda t: t * scalar)

    __rmul__ = __mul__

    def flat(self) -> FloatArray:
        """All tensors raveled and concatenated in canonical order."""
        return np.concatenate([t.ravel() for t in self.tensors.values()])

    def norm(self) -> float:
        """Euclidean norm of the flattened parameters."""
        return float(np.linalg.norm(self.flat()))

    def is_finite(self) -> bool:
        """True when no tensor holds NaN or Inf."""
        return all(bool(np.isfinite(t).all()) for t in self.tensors.values())

    def ensure_finite(self, what: str = "parameters") -> "ModelParams":
        """Raise NumericalError on any NaN or Inf."""
        if not self.is_finite():
            raise NumericalError(f"Non-finite values in {what}")
        return self

    def bit_equal(self, other: "ModelParams") -> bool:
        """True when every tensor is bit-identical."""
        return self.tensors.keys() == other.tensors.keys() and all(
            np.array_equal(t, other.tensors[n]) for n, t in self.tensors.items()
        )
