"""Per-graph statistic histograms."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Hashable, Iterable

import networkx as nx
import numpy as np

from ..graphs.alias import FloatArray
from ..graphs.graph import LabeledGraph

NORMALIZED_TOLERANCE = 1e-12


@dataclass(frozen=True)
class Histogram:
    """
    Non-negative masses over category keys.

    Ordered histograms have keys 0..k-1 on a line with spacing `bin_width`; unordered ones
    have arbitrary hashable keys kept in sorted order.
    """

    keys: tuple[Hashable, ...]
    values: FloatArray
    ordered: bool = False
    bin_width: float = 1.0

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=np.float64)
        if values.shape != (len(self.keys),):
            raise ValueError(f"{len(self.keys)} keys but values of shape {values.shape}")
        if np.any(values < 0):
            raise ValueError("Histogram values must be non-negative")
        if self.ordered and self.keys != tuple(range(len(self.keys))):
            raise ValueError("Ordered histograms need keys 0..k-1")
        object.__setattr__(self, "values", values)

    @classmethod
    def from_counts(cls, counts: Counter | dict) -> "Histogram":
        """Unordered histogram with deterministically sorted keys."""
        keys = tuple(sorted(counts, key=repr))
        return cls(keys, np.array([counts[k] for k in keys], dtype=np.float64))

    @property
    def total(self) -> float:
        """Sum of all masses."""
        return float(self.values.sum())

    @property
    def is_normalized(self) -> bool:
        """True when the masses sum to 1."""
        return abs(self.total - 1.0) <= NORMALIZED_TOLERANCE

    def normalized(self) -> "Histogram":
        """Same keys with masses summing to 1; an all-zero histogram stays zero."""
        total = self.total
        values = self.values / total if total > 0 else self.values
        return Histogram(self.keys, values, self.ordered, self.bin_width)

    def as_dict(self) -> dict[Hashable, float]:
        """Mapping of key to mass."""
        return {k: float(v) for k, v in zip(self.keys, self.values)}


def ordered_histogram(counts: Iterable[float], bin_width: float = 1.0) -> Histogram:
    """Ordered histogram over categories 0..k-1."""
    values = np.asarray(list(counts), dtype=np.float64)
    return Histogram(tuple(range(len(values))), values, ordered=True, bin_width=bin_width)


def degree_hist(g: LabeledGraph) -> Histogram:
    """Normalized histogram of node degrees over 0..max-degree."""
    return ordered_histogram(nx.degree_histogram(g.to_networkx())).normalized()


def clustering_hist(g: LabeledGraph, bins: int = 100) -> Histogram:
    """Local clustering coefficients binned into `bins` equal bins on [0, 1], normalized."""
    if bins < 1:
        raise ValueError(f"bins must be >= 1, got {bins}")
    coefficients = list(nx.clustering(g.to_networkx()).values())
    counts, _ = np.histogram(coefficients, bins=bins, range=(0.0, 1.0))
    return ordered_histogram(counts, bin_width=1.0 / bins).normalized()


def node_label_hist(g: LabeledGraph) -> Histogram:
    """Normalized node-label counts keyed by label text."""
    texts = g.node_labels.texts
    return Histogram.from_counts(Counter(texts[label] for label in g.nodes)).normalized()


def edge_label_hist(g: LabeledGraph) -> Histogram:
    """Normalized edge-label counts keyed by label text."""
    texts = g.edge_labels.texts
    return Histogram.from_counts(Counter(texts[e[2]] for e in g.edges)).normalized()


def label_degree_hist(g: LabeledGraph) -> Histogram:
    """Normalized counts of (node-label text, degree) pairs."""
    texts = g.node_labels.texts
    pairs = Counter(zip((texts[label] for label in g.nodes), g.degrees()))
    return Histogram.from_counts(pairs).normalized()
