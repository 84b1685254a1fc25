"""Generation quality metrics."""

from .histogram import (
    Histogram,
    clustering_hist,
    degree_hist,
    edge_label_hist,
    label_degree_hist,
    node_label_hist,
    ordered_histogram,
)
from .kernels import (
    GaussianEMDKernel,
    GaussianTVKernel,
    Kernel,
    KernelKind,
    KernelSpec,
    LinearKernel,
    gaussian_emd_kernel,
    gaussian_tv_kernel,
    mmd,
    total_variation,
    wasserstein_1d,
)
from .novelty import novelty, uniqueness, uniqueness_keep_one
from .nspdk import nspdk_features, nspdk_mmd
from .orbits import NUM_ORBITS, connected_subsets, orbit_counts, orbit_hist, orbit_vector
from .report import EvalConfig, MetricReport, evaluate, label_metrics

__all__ = [
    "EvalConfig",
    "GaussianEMDKernel",
    "GaussianTVKernel",
    "Histogram",
    "Kernel",
    "KernelKind",
    "KernelSpec",
    "LinearKernel",
    "MetricReport",
    "NUM_ORBITS",
    "clustering_hist",
    "connected_subsets",
    "degree_hist",
    "edge_label_hist",
    "evaluate",
    "gaussian_emd_kernel",
    "gaussian_tv_kernel",
    "label_degree_hist",
    "label_metrics",
    "mmd",
    "node_label_hist",
    "novelty",
    "nspdk_features",
    "nspdk_mmd",
    "orbit_counts",
    "orbit_hist",
    "orbit_vector",
    "ordered_histogram",
    "total_variation",
    "uniqueness",
    "uniqueness_keep_one",
    "wasserstein_1d",
]
