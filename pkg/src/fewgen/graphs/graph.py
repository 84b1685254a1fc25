"""The labeled graph data model."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import TYPE_CHECKING

import networkx as nx

from ..errors import InvalidGraphError
from .alias import Edge, EdgeList, NodeLabels, Permutation
from .labels import LabelVocabulary

if TYPE_CHECKING:
    from ..canon.code import DfsCode


@dataclass(frozen=True)
class LabeledGraph:
    """
    An undirected, connected graph with one categorical label per node and per edge.

    Nodes are the indices 0..n-1 of `nodes`, which holds node-label ids. Edges are stored once
    as (u, v, edge-label id) with u < v, sorted by (u, v). Construction normalizes edge
    orientation and order and validates every invariant.
    """

    nodes: tuple[int, ...]
    edges: tuple[Edge, ...]
    node_labels: LabelVocabulary
    edge_labels: LabelVocabulary

    def __post_init__(self) -> None:
        nodes = tuple(int(label) for label in self.nodes)
        edges = tuple(
            sorted((int(min(u, v)), int(max(u, v)), int(label)) for u, v, label in self.edges)
        )
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "edges", edges)
        self._validate()

    def _validate(self) -> None:
        n = len(self.nodes)
        if n < 2:
            raise InvalidGraphError(f"A graph needs at least 2 nodes, got {n}")
        for label in self.nodes:
            if not 0 <= label < len(self.node_labels):
                raise InvalidGraphError(f"Unknown node label id {label}")
        seen: set[tuple[int, int]] = set()
        for u, v, label in self.edges:
            if u == v:
                raise InvalidGraphError(f"Self-loop on node {u}")
            if u < 0 or v >= n:
                raise InvalidGraphError(f"Dangling node index in edge ({u}, {v})")
            if (u, v) in seen:
                raise InvalidGraphError(f"Duplicate edge ({u}, {v})")
            if not 0 <= label < len(self.edge_labels):
                raise InvalidGraphError(f"Unknown edge label id {label}")
            seen.add((u, v))
        if not nx.is_connected(self.to_networkx()):
            raise InvalidGraphError("Graph is not connected")

    @property
    def num_nodes(self) -> int:
        """Number of nodes n."""
        return len(self.nodes)

    @property
    def num_edges(self) -> int:
        """Number of edges m."""
        return len(self.edges)

    @cached_property
    def adjacency(self) -> tuple[dict[int, int], ...]:
        """Per node, a mapping neighbor -> edge-label id."""
        adj: list[dict[int, int]] = [{} for _ in self.nodes]
        for u, v, label in self.edges:
            adj[u][v] = label
            adj[v][u] = label
        return tuple(adj)

    def degrees(self) -> tuple[int, ...]:
        """Degree of every node."""
        return tuple(len(neighbors) for neighbors in self.adjacency)

    def to_networkx(self) -> nx.Graph:
        """Return a networkx graph with `label` attributes holding label texts."""
        graph = nx.Graph()
        for node, label in enumerate(self.nodes):
            graph.add_node(node, label=self.node_labels.texts[label])
        for u, v, label in self.edges:
            graph.add_edge(u, v, label=self.edge_labels.texts[label])
        return graph

    def min_code(self) -> "DfsCode":
        """The minimum DFS code, computed once per graph."""
        return _cached_min_code(self)

    def relabel(
        self,
        node_labels: LabelVocabulary,
        edge_labels: LabelVocabulary,
    ) -> "LabeledGraph":
        """Re-express the graph in other vocabularies containing all of its label texts."""
        node_map = [node_labels.id_of(text) for text in self.node_labels]
        edge_map = [edge_labels.id_of(text) for text in self.edge_labels]
        return LabeledGraph(
            nodes=tuple(node_map[label] for label in self.nodes),
            edges=tuple((u, v, edge_map[label]) for u, v, label in self.edges),
            node_labels=node_labels,
            edge_labels=edge_labels,
        )


def make_graph(
    node_texts: NodeLabels | tuple[str, ...],
    edges: EdgeList | tuple[tuple[int, int, str], ...],
    node_labels: LabelVocabulary | None = None,
    edge_labels: LabelVocabulary | None = None,
) -> LabeledGraph:
    """
    Convenience constructor from label texts.

    `node_texts` holds one label text per node and `edges` holds (u, v, edge-label text).
    Vocabularies default to first-appearance order of the given texts.
    """
    node_vocab = node_labels or LabelVocabulary.from_texts(str(t) for t in node_texts)
    edge_vocab = edge_labels or LabelVocabulary.from_texts(str(e[2]) for e in edges)
    return LabeledGraph(
        nodes=tuple(node_vocab.id_of(str(t)) for t in node_texts),
        edges=tuple((u, v, edge_vocab.id_of(str(label))) for u, v, label in edges),
        node_labels=node_vocab,
        edge_labels=edge_vocab,
    )


def permute_graph(g: LabeledGraph, perm: Permutation) -> LabeledGraph:
    """
    Rename node i to perm[i].

    The result carries the same labeled edges under the renaming.
    """
    n = g.num_nodes
    if len(perm) != n or sorted(perm) != list(range(n)):
        raise InvalidGraphError(f"Not a permutation of {n} nodes: {list(perm)!r}")
    nodes = [0] * n
    for old, new in enumerate(perm):
        nodes[new] = g.nodes[old]
    return LabeledGraph(
        nodes=tuple(nodes),
        edges=tuple((perm[u], perm[v], label) for u, v, label in g.edges),
        node_labels=g.node_labels,
        edge_labels=g.edge_labels,
    )


def _cached_min_code(g: LabeledGraph) -> "DfsCode":
    cached = g.__dict__.get("_min_code")
    if cached is None:
        from ..canon.min_code import min_dfs_code

        cached = min_dfs_code(g)
        g.__dict__["_min_code"] = cached
    return cached
