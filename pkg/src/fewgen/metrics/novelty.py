"""Novelty and uniqueness of generated graphs, decided by labeled subgraph embedding."""

from __future__ import annotations

from typing import Sequence

from ..graphs.graph import LabeledGraph
from ..graphs.isomorphism import is_subgraph
from ..parallel import apply_parallel


def _percentage(flags: Sequence[bool]) -> float:
    if not flags:
        raise ValueError("Percentage over an empty set")
    return 100.0 * sum(flags) / len(flags)


def novelty(
    gen: Sequence[LabeledGraph],
    train: Sequence[LabeledGraph],
    workers: int = 1,
) -> float:
    """Percentage of generated graphs that embed into no training graph."""
    flags = apply_parallel(
        list(gen), lambda g: not any(is_subgraph(g, t) for t in train), workers
    )
    return _percentage(flags)


def uniqueness(gen: Sequence[LabeledGraph], workers: int = 1) -> float:
    """Percentage of generated graphs that embed into no other generated graph."""
    graphs = list(gen)

    def survives(i: int) -> bool:
        return not any(is_subgraph(graphs[i], h) for j, h in enumerate(graphs) if j != i)

    return _percentage(apply_parallel(list(range(len(graphs))), survives, workers))


def uniqueness_keep_one(gen: Sequence[LabeledGraph], workers: int = 1) -> float:
    """
    Uniqueness that keeps the first of every group of isomorphic copies.

    A graph is removed when it embeds into a larger generated graph or into an earlier
    generated graph of the same size, which is then isomorphic to it.
    """
    graphs = list(gen)

    def size(g: LabeledGraph) -> tuple[int, int]:
        return g.num_nodes, g.num_edges

    def survives(i: int) -> bool:
        g = graphs[i]
        for j, h in enumerate(graphs):
            if j == i:
                continue
            if size(h) == size(g) and j > i:
                continue
            if is_subgraph(g, h):
                return False
        return True

    return _percentage(apply_parallel(list(range(len(graphs))), survives, workers))
