"""
The full metric report comparing generated graphs to reference graphs.

Structural statistics use transport or total-variation Gaussian kernels, NSPDK uses the
linear kernel on its normalized features. Metrics that do not apply (edge labels of unlabeled
datasets) are reported as N/A, never as NaN.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, fields
from typing import Any, Callable, Sequence

from ..errors import ConfigError
from ..graphs.dataset import GraphDataset, unify_datasets
from ..graphs.fields import GraphField
from ..graphs.graph import LabeledGraph
from ..parallel import apply_parallel
from .histogram import (
    Histogram,
    clustering_hist,
    degree_hist,
    edge_label_hist,
    label_degree_hist,
    node_label_hist,
)
from .kernels import GaussianEMDKernel, GaussianTVKernel, Kernel, mmd
from .novelty import novelty, uniqueness, uniqueness_keep_one
from .nspdk import nspdk_mmd
from .orbits import orbit_hist

logger = logging.getLogger(__name__)

NOT_APPLICABLE = "N/A"


@dataclass(frozen=True)
class EvalConfig:
    """Kernel bandwidth, clustering bins and NSPDK radius and distance limits."""

    sigma: float = 1.0
    clustering_bins: int = 100
    nspdk_radius: int = 2
    nspdk_distance: int = 3

    def __post_init__(self) -> None:
        if self.sigma <= 0:
            raise ConfigError(f"sigma must be > 0, got {self.sigma}")
        if self.clustering_bins < 1:
            raise ConfigError(f"clustering_bins must be >= 1, got {self.clustering_bins}")
        if self.nspdk_radius < 0 or self.nspdk_distance < 0:
            raise ConfigError("NSPDK radius and distance must be >= 0")


@dataclass(frozen=True)
class MetricReport:
    """Every metric of one generated set; None marks a metric that does not apply."""

    degree_mmd: float
    clustering_mmd: float
    orbit_mmd: float
    nspdk_mmd: float
    node_label_mmd: float
    edge_label_mmd: float | None
    joint_label_degree_mmd: float
    avg_nodes_gen: float
    avg_nodes_ref: float
    avg_edges_gen: float
    avg_edges_ref: float
    novelty_pct: float
    uniqueness_pct: float
    uniqueness_keep_one_pct: float

    def to_dict(self) -> dict[str, Any]:
        """Field name to value, N/A for metrics that do not apply."""
        return {
            f.name: NOT_APPLICABLE if getattr(self, f.name) is None else getattr(self, f.name)
            for f in fields(self)
        }

    def to_text(self) -> str:
        """One `name<TAB>value` line per metric."""
        lines = []
        for key, value in self.to_dict().items():
            rendered = value if isinstance(value, str) else f"{value:.10g}"
            lines.append(f"{key}\t{rendered}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        """The report as a JSON object."""
        return json.dumps(self.to_dict(), indent=2, sort_keys=False) + "\n"

    @classmethod
    def metric_names(cls) -> list[str]:
        """Report fields in order."""
        return [f.name for f in fields(cls)]


def _statistic_mmd(
    gen: Sequence[LabeledGraph],
    ref: Sequence[LabeledGraph],
    statistic: Callable[[LabeledGraph], Histogram],
    kernel: Kernel,
    workers: int,
) -> float:
    return mmd(
        apply_parallel(list(gen), statistic, workers),
        apply_parallel(list(ref), statistic, workers),
        kernel,
        workers,
    )


def label_metrics(
    gen: GraphDataset,
    ref: GraphDataset,
    sigma: float = 1.0,
    workers: int = 1,
) -> tuple[float, float | None, float]:
    """Node-label, edge-label (None without edge labels) and joint label-degree MMDs."""
    kernel = GaussianTVKernel(sigma)
    node = _statistic_mmd(gen, ref, node_label_hist, kernel, workers)
    edge = None
    if not (gen.is_unlabeled and ref.is_unlabeled):
        edge = _statistic_mmd(gen, ref, edge_label_hist, kernel, workers)
    joint = _statistic_mmd(gen, ref, label_degree_hist, kernel, workers)
    return node, edge, joint


def evaluate(
    gen: GraphDataset,
    test: GraphDataset,
    train: GraphDataset,
    config: EvalConfig | None = None,
    workers: int = 1,
) -> MetricReport:
    """Compare generated graphs with the test graphs, and with training graphs for novelty."""
    config = config or EvalConfig()
    if not len(gen) or not len(test) or not len(train):
        raise ValueError("Evaluation needs nonempty generated, test and training sets")
    gen, test, train = unify_datasets(gen, test, train)
    emd = GaussianEMDKernel(config.sigma)
    tv = GaussianTVKernel(config.sigma)
    node, edge, joint = label_metrics(gen, test, config.sigma, workers)
    report = MetricReport(
        degree_mmd=_statistic_mmd(gen, test, degree_hist, emd, workers),
        clustering_mmd=_statistic_mmd(
            gen, test, lambda g: clustering_hist(g, config.clustering_bins), emd, workers
        ),
        orbit_mmd=_statistic_mmd(gen, test, orbit_hist, tv, workers),
        nspdk_mmd=nspdk_mmd(gen, test, config.nspdk_radius, config.nspdk_distance, workers),
        node_label_mmd=node,
        edge_label_mmd=edge,
        joint_label_degree_mmd=joint,
        avg_nodes_gen=float(gen.average(GraphField.NODES)),
        avg_nodes_ref=float(test.average(GraphField.NODES)),
        avg_edges_gen=float(gen.average(GraphField.EDGES)),
        avg_edges_ref=float(test.average(GraphField.EDGES)),
        novelty_pct=novelty(gen, train, workers),
        uniqueness_pct=uniqueness(gen, workers),
        uniqueness_keep_one_pct=uniqueness_keep_one(gen, workers),
    )
    logger.info(
        "Evaluated %d generated graphs: degree=%.6f clustering=%.6f orbit=%.6f nspdk=%.6f",
        len(gen),
        report.degree_mmd,
        report.clustering_mmd,
        report.orbit_mmd,
        report.nspdk_mmd,
    )
    return report
