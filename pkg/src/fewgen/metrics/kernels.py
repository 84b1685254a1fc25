"""
Kernels between graph statistics and the MMD estimator.

`Kernel` is the abstract base; concrete kernels compare two histograms. `KernelSpec` names a
kernel and its bandwidth so configurations can be serialized.
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from ..errors import ConfigError
from ..graphs.alias import FloatArray
from ..parallel import apply_parallel
from .histogram import Histogram


def wasserstein_1d(h1: Histogram, h2: Histogram) -> float:
    """First Wasserstein distance of two ordered histograms on the same bin grid."""
    if not (h1.ordered and h2.ordered):
        raise ValueError("Transport distance needs ordered histograms")
    if h1.bin_width != h2.bin_width:
        raise ValueError(f"Bin widths differ: {h1.bin_width} != {h2.bin_width}")
    size = max(len(h1.keys), len(h2.keys))
    p = np.pad(h1.values, (0, size - len(h1.keys)))
    q = np.pad(h2.values, (0, size - len(h2.keys)))
    return float(np.abs(np.cumsum(p) - np.cumsum(q)).sum() * h1.bin_width)


def total_variation(h1: Histogram, h2: Histogram) -> float:
    """Half the L1 distance over the union of keys."""
    a = h1.as_dict()
    b = h2.as_dict()
    return 0.5 * sum(abs(a.get(k, 0.0) - b.get(k, 0.0)) for k in set(a) | set(b))


class Kernel(ABC):
    """
    Abstract base class for kernels between histograms.

    Subclasses implement `__call__`; `gram` evaluates all pairs of two sets.
    """

    @abstractmethod
    def __call__(self, x: Histogram, y: Histogram) -> float:
        """Kernel value k(x, y)."""
        raise NotImplementedError

    def gram(
        self,
        xs: Sequence[Histogram],
        ys: Sequence[Histogram],
        workers: int = 1,
    ) -> FloatArray:
        """Matrix of k(x_i, y_j); rows are computed in parallel."""
        rows = apply_parallel(list(xs), lambda x: [self(x, y) for y in ys], workers)
        return np.asarray(rows, dtype=np.float64).reshape(len(xs), len(ys))

    def __eq__(self, other: object) -> bool:
        """Disable == operator for Kernel objects."""
        raise TypeError("== operator is not supported for Kernel objects.")

    def __ne__(self, other: object) -> bool:
        """Disable != operator for Kernel objects."""
        raise TypeError("!= operator is not supported for Kernel objects.")

    __hash__ = object.__hash__


class GaussianEMDKernel(Kernel):
    """exp(-W1^2 / (2 sigma^2)) on normalized ordered histograms."""

    def __init__(self, sigma: float = 1.0):
        self.sigma = sigma

    def __call__(self, x: Histogram, y: Histogram) -> float:
        if not (x.is_normalized and y.is_normalized):
            raise ValueError("Transport kernel needs normalized histograms")
        d = wasserstein_1d(x, y)
        return math.exp(-d * d / (2.0 * self.sigma**2))


class GaussianTVKernel(Kernel):
    """exp(-TV^2 / (2 sigma^2)) over the union of categories."""

    def __init__(self, sigma: float = 1.0):
        self.sigma = sigma

    def __call__(self, x: Histogram, y: Histogram) -> float:
        d = total_variation(x, y)
        return math.exp(-d * d / (2.0 * self.sigma**2))


class LinearKernel(Kernel):
    """Dot product over the union of keys."""

    def __call__(self, x: Histogram, y: Histogram) -> float:
        b = y.as_dict()
        return sum(v * b.get(k, 0.0) for k, v in x.as_dict().items())


class KernelKind(Enum):
    """Kernel families."""

    GAUSSIAN_EMD = "gaussian-emd"
    GAUSSIAN_TV = "gaussian-tv"
    LINEAR = "linear"


@dataclass(frozen=True)
class KernelSpec:
    """A kernel family and its bandwidth."""

    kind: KernelKind
    sigma: float = 1.0

    def __post_init__(self) -> None:
        if self.kind is not KernelKind.LINEAR and self.sigma <= 0:
            raise ConfigError(f"sigma must be > 0, got {self.sigma}")

    def build(self) -> Kernel:
        """The kernel these settings describe."""
        if self.kind is KernelKind.GAUSSIAN_EMD:
            return GaussianEMDKernel(self.sigma)
        elif self.kind is KernelKind.GAUSSIAN_TV:
            return GaussianTVKernel(self.sigma)
        return LinearKernel()


def gaussian_emd_kernel(
    h1: Histogram,
    h2: Histogram,
    sigma: float = 1.0,
) -> float:
    """Gaussian kernel on the transport distance of two ordered histograms."""
    return GaussianEMDKernel(sigma)(h1, h2)


def gaussian_tv_kernel(
    h1: Histogram,
    h2: Histogram,
    sigma: float = 1.0,
) -> float:
    """Gaussian kernel on the total variation distance of two histograms."""
    return GaussianTVKernel(sigma)(h1, h2)


def mmd_from_gram(
    k_aa: FloatArray,
    k_bb: FloatArray,
    k_ab: FloatArray,
) -> float:
    """Biased squared MMD from the three Gram blocks, clamped at 0."""
    value = float(k_aa.mean() + k_bb.mean() - 2.0 * k_ab.mean())
    return max(value, 0.0)


def mmd(
    set_a: Sequence[Histogram],
    set_b: Sequence[Histogram],
    kernel: Kernel | KernelSpec,
    workers: int = 1,
) -> float:
    """
    Squared maximum mean discrepancy between two statistic sets.

    Uses the biased estimator with diagonal terms included.
    """
    if not set_a or not set_b:
        raise ValueError("MMD needs two nonempty sets")
    if isinstance(kernel, KernelSpec):
        kernel = kernel.build()
    return mmd_from_gram(
        kernel.gram(set_a, set_a, workers),
        kernel.gram(set_b, set_b, workers),
        kernel.gram(set_a, set_b, workers),
    )
