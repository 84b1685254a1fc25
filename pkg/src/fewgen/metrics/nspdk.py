"""
Neighborhood subgraph pairwise distance features.

For each ordered node pair (u, w) at shortest-path distance d and each radius r, the pair of
rooted r-neighborhoods of u and w is hashed together with (r, d) into one sparse feature.
A rooted neighborhood is identified by the minimum DFS code of the ball around its root, with
every node label extended by its distance to the root, so identifiers do not depend on node
numbering.
"""

from __future__ import annotations

import hashlib
import math
from collections import Counter
from typing import Sequence

import networkx as nx
import numpy as np
from scipy.sparse import csr_matrix

from ..canon.min_code import min_dfs_code
from ..graphs.graph import LabeledGraph, make_graph
from ..graphs.labels import LabelVocabulary
from ..parallel import apply_parallel
from .kernels import mmd_from_gram

FeatureMap = dict[int, float]


def _feature_key(
    radius: int,
    distance: int,
    root_u: str,
    root_w: str,
) -> int:
    text = f"{radius}\x1f{distance}\x1f{root_u}\x1f{root_w}"
    return int.from_bytes(hashlib.blake2b(text.encode(), digest_size=8).digest(), "little")


def rooted_identifier(
    g: LabeledGraph,
    root: int,
    distances: dict[int, int],
    radius: int,
) -> str:
    """Canonical text of the ball of `radius` around `root`."""
    texts = g.node_labels.texts
    ball = sorted(node for node, d in distances.items() if d <= radius)
    if len(ball) == 1:
        return f"node:{texts[g.nodes[root]]}"
    position = {node: i for i, node in enumerate(ball)}
    node_texts = [f"{texts[g.nodes[node]]}|{distances[node]}" for node in ball]
    edges = [
        (position[u], position[v], g.edge_labels.texts[label])
        for u, v, label in g.edges
        if u in position and v in position
    ]
    node_vocab = LabelVocabulary(tuple(sorted(set(node_texts))))
    edge_vocab = LabelVocabulary(tuple(sorted({e[2] for e in edges})))
    code = min_dfs_code(make_graph(node_texts, edges, node_vocab, edge_vocab))
    return f"{' '.join(node_vocab)}#{' '.join(edge_vocab)}#{code.format()}"


def nspdk_features(
    g: LabeledGraph,
    max_radius: int = 2,
    max_distance: int = 3,
) -> FeatureMap:
    """L2-normalized sparse feature map of a graph, keyed by 64-bit hashes."""
    lengths = dict(nx.all_pairs_shortest_path_length(g.to_networkx()))
    identifiers = {
        (node, radius): rooted_identifier(g, node, lengths[node], radius)
        for node in range(g.num_nodes)
        for radius in range(max_radius + 1)
    }
    counts: Counter[int] = Counter()
    for u in range(g.num_nodes):
        for w, distance in lengths[u].items():
            if distance > max_distance:
                continue
            for radius in range(max_radius + 1):
                key = _feature_key(
                    radius, distance, identifiers[(u, radius)], identifiers[(w, radius)]
                )
                counts[key] += 1
    norm = math.sqrt(sum(c * c for c in counts.values()))
    return {key: c / norm for key, c in counts.items()}


def feature_matrix(features: Sequence[FeatureMap], columns: dict[int, int]) -> csr_matrix:
    """Rows of feature maps over a shared key-to-column mapping."""
    data: list[float] = []
    indices: list[int] = []
    indptr = [0]
    for row in features:
        for key, value in sorted(row.items()):
            indices.append(columns[key])
            data.append(value)
        indptr.append(len(indices))
    return csr_matrix((data, indices, indptr), shape=(len(features), len(columns)))


def nspdk_mmd(
    gen: Sequence[LabeledGraph],
    ref: Sequence[LabeledGraph],
    max_radius: int = 2,
    max_distance: int = 3,
    workers: int = 1,
) -> float:
    """Squared MMD with the linear kernel on normalized NSPDK features."""
    if not len(gen) or not len(ref):
        raise ValueError("MMD needs two nonempty sets")
    graphs = list(gen) + list(ref)
    features = apply_parallel(
        graphs, lambda g: nspdk_features(g, max_radius, max_distance), workers
    )
    keys = sorted({key for row in features for key in row})
    columns = {key: i for i, key in enumerate(keys)}
    x = feature_matrix(features[: len(gen)], columns)
    y = feature_matrix(features[len(gen):], columns)
    return mmd_from_gram(
        np.asarray((x @ x.T).todense()),
        np.asarray((y @ y.T).todense()),
        np.asarray((x @ y.T).todense()),
    )
