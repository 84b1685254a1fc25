"""
Orbit counts of connected four-node graphlets.

Orbit indices:

    0  path, end node            6  paw, triangle node of degree 2
    1  path, middle node         7  paw, degree-3 node
    2  star, leaf                8  diamond, degree-2 node
    3  star, center              9  diamond, degree-3 node
    4  cycle                    10  complete graph
    5  paw, pendant node
"""

from __future__ import annotations

from itertools import combinations

import numpy as np

from ..graphs.alias import FloatArray, IntArray
from ..graphs.graph import LabeledGraph
from .histogram import Histogram

NUM_ORBITS = 11

# (induced edge count, sorted degree sequence) -> orbit of a node by its induced degree
_GRAPHLET_ORBITS: dict[tuple[int, tuple[int, ...]], dict[int, int]] = {
    (3, (1, 1, 2, 2)): {1: 0, 2: 1},
    (3, (1, 1, 1, 3)): {1: 2, 3: 3},
    (4, (2, 2, 2, 2)): {2: 4},
    (4, (1, 2, 2, 3)): {1: 5, 2: 6, 3: 7},
    (5, (2, 2, 3, 3)): {2: 8, 3: 9},
    (6, (3, 3, 3, 3)): {3: 10},
}


def connected_subsets(g: LabeledGraph, size: int = 4) -> set[frozenset[int]]:
    """Every node set of the given size that induces a connected subgraph."""
    adjacency = g.adjacency
    found: set[frozenset[int]] = set()
    seen: set[frozenset[int]] = set()

    def grow(current: frozenset[int]) -> None:
        if current in seen:
            return
        seen.add(current)
        if len(current) == size:
            found.add(current)
            return
        for node in current:
            for neighbor in adjacency[node]:
                if neighbor not in current:
                    grow(current | {neighbor})

    for start in range(g.num_nodes):
        grow(frozenset((start,)))
    return found


def orbit_counts(g: LabeledGraph) -> IntArray:
    """Per-node orbit counts, shape (num_nodes, 11)."""
    adjacency = g.adjacency
    counts = np.zeros((g.num_nodes, NUM_ORBITS), dtype=np.int64)
    for subset in connected_subsets(g):
        nodes = sorted(subset)
        degree = dict.fromkeys(nodes, 0)
        edges = 0
        for u, v in combinations(nodes, 2):
            if v in adjacency[u]:
                degree[u] += 1
                degree[v] += 1
                edges += 1
        orbits = _GRAPHLET_ORBITS[(edges, tuple(sorted(degree.values())))]
        for node in nodes:
            counts[node, orbits[degree[node]]] += 1
    return counts


def orbit_vector(g: LabeledGraph) -> FloatArray:
    """Mean orbit-count vector over the nodes of a graph."""
    return orbit_counts(g).mean(axis=0)


def orbit_hist(g: LabeledGraph) -> Histogram:
    """The mean orbit-count vector as an unnormalized histogram over the orbit indices."""
    return Histogram(tuple(range(NUM_ORBITS)), orbit_vector(g))
