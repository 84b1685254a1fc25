"""Synthetic N-body spring graphs."""

from __future__ import annotations

import logging

import networkx as nx
import numpy as np

from ..errors import ConfigError, InvalidGraphError
from .dataset import GraphDataset
from .graph import LabeledGraph
from .labels import LabelVocabulary

logger = logging.getLogger(__name__)

# per graph
MAX_REJECTIONS = 100_000


def grid_vocabulary(grid_side: int) -> LabelVocabulary:
    """One label per grid cell, row-major, named `r<row>c<col>`."""
    return LabelVocabulary(
        tuple(f"r{row}c{col}" for row in range(grid_side) for col in range(grid_side))
    )


def synth_spring(
    n_particles: int,
    how_many: int,
    grid_side: int = 5,
    edge_prob: float = 0.5,
    seed: int = 0,
) -> GraphDataset:
    """
    Sample `how_many` connected spring-system graphs.

    Each particle is labeled by a uniformly random cell of a grid_side x grid_side grid and
    each pair of particles is joined by a spring with probability `edge_prob`. Disconnected
    samples are redrawn whole.
    """
    if n_particles < 2:
        raise ConfigError(f"n_particles must be >= 2, got {n_particles}")
    if not 0 < edge_prob <= 1:
        raise ConfigError(f"edge_prob must be in (0, 1], got {edge_prob}")
    if grid_side < 1 or how_many < 1:
        raise ConfigError("grid_side and how_many must be positive")

    rng = np.random.default_rng(seed)
    node_labels = grid_vocabulary(grid_side)
    edge_labels = LabelVocabulary.unlabeled()
    pairs = [(u, v) for u in range(n_particles) for v in range(u + 1, n_particles)]
    graphs: list[LabeledGraph] = []
    rejections = 0
    attempts = 0
    while len(graphs) < how_many:
        cells = rng.integers(0, grid_side * grid_side, size=n_particles)
        keep = rng.random(len(pairs)) < edge_prob
        edges = [(u, v, 0) for (u, v), kept in zip(pairs, keep) if kept]
        candidate = nx.Graph()
        candidate.add_nodes_from(range(n_particles))
        candidate.add_edges_from((u, v) for u, v, _ in edges)
        if not nx.is_connected(candidate):
            rejections += 1
            attempts += 1
            if attempts > MAX_REJECTIONS:
                raise InvalidGraphError(
                    f"Gave up on graph {len(graphs)} after {MAX_REJECTIONS} disconnected samples"
                )
            continue
        attempts = 0
        graphs.append(
            LabeledGraph(tuple(int(c) for c in cells), tuple(edges), node_labels, edge_labels)
        )
    logger.info(
        "Synthesized %d spring graphs with %d particles (%d rejections)",
        how_many,
        n_particles,
        rejections,
    )
    return GraphDataset(f"spring-{n_particles}", tuple(graphs), node_labels, edge_labels)
