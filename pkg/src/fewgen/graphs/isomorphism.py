"""Labeled isomorphism and subgraph-isomorphism queries."""

from __future__ import annotations

from collections import Counter

from networkx.algorithms.isomorphism import GraphMatcher

from ..errors import VocabularyError
from .graph import LabeledGraph


def _check_vocabularies(g1: LabeledGraph, g2: LabeledGraph) -> None:
    if g1.node_labels != g2.node_labels or g1.edge_labels != g2.edge_labels:
        raise VocabularyError("Graphs do not share label vocabularies")


def _same_label(a: dict, b: dict) -> bool:
    return a["label"] == b["label"]


def is_isomorphic(g1: LabeledGraph, g2: LabeledGraph) -> bool:
    """True iff both graphs have the same minimum DFS code."""
    _check_vocabularies(g1, g2)
    if g1.num_nodes != g2.num_nodes or g1.num_edges != g2.num_edges:
        return False
    return g1.min_code() == g2.min_code()


def is_subgraph(small: LabeledGraph, big: LabeledGraph) -> bool:
    """
    True iff `small` embeds into `big`.

    An embedding is an injective, label-preserving node map carrying every edge of `small`
    onto an edge of `big` with the same label; `big` may have extra edges.
    """
    _check_vocabularies(small, big)
    if small.num_nodes > big.num_nodes or small.num_edges > big.num_edges:
        return False
    if Counter(small.nodes) - Counter(big.nodes):
        return False
    if Counter(e[2] for e in small.edges) - Counter(e[2] for e in big.edges):
        return False
    matcher = GraphMatcher(
        big.to_networkx(),
        small.to_networkx(),
        node_match=_same_label,
        edge_match=_same_label,
    )
    return matcher.subgraph_is_monomorphic()
