"""Decoding DFS codes back into labeled graphs."""

from __future__ import annotations

from typing import Sequence

from ..errors import InvalidCodeError, InvalidGraphError
from ..graphs.graph import LabeledGraph
from ..graphs.labels import LabelVocabulary
from .code import DfsCode
from .tuples import EdgeTuple


def _default_vocabulary(size: int) -> LabelVocabulary:
    return LabelVocabulary(tuple(str(i) for i in range(size)))


def code_to_graph(
    s: DfsCode | Sequence[EdgeTuple],
    node_labels: LabelVocabulary | None = None,
    edge_labels: LabelVocabulary | None = None,
) -> LabeledGraph:
    """
    Build the graph a code describes: one node per timestamp, one edge per tuple.

    Node labels come from the tuple that introduces each timestamp. Without vocabularies, ids
    are rendered as their decimal text.
    """
    tuples = tuple(s)
    if not tuples:
        raise InvalidCodeError("Empty code")
    labels: dict[int, int] = {}
    edges: dict[tuple[int, int], int] = {}
    for index, t in enumerate(tuples):
        if t.t_u == t.t_v:
            raise InvalidCodeError(f"Tuple {index} is a self-loop")
        for stamp, label in ((t.t_u, t.l_u), (t.t_v, t.l_v)):
            if stamp not in labels:
                if stamp != len(labels):
                    raise InvalidCodeError(
                        f"Tuple {index} skips to timestamp {stamp}, next is {len(labels)}"
                    )
                labels[stamp] = label
            elif labels[stamp] != label:
                raise InvalidCodeError(f"Tuple {index} relabels timestamp {stamp}")
        key = (min(t.t_u, t.t_v), max(t.t_u, t.t_v))
        if key in edges:
            raise InvalidCodeError(f"Tuple {index} repeats edge {key}")
        edges[key] = t.l_uv
    node_vocab = node_labels or _default_vocabulary(1 + max(labels.values()))
    edge_vocab = edge_labels or _default_vocabulary(1 + max(edges.values()))
    try:
        return LabeledGraph(
            nodes=tuple(labels[i] for i in range(len(labels))),
            edges=tuple((u, v, label) for (u, v), label in edges.items()),
            node_labels=node_vocab,
            edge_labels=edge_vocab,
        )
    except InvalidGraphError as exc:
        raise InvalidCodeError(f"Code does not describe a valid graph: {exc}") from exc
