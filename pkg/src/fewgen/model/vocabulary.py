"""
Token spaces of the five tuple components and their one-hot encoding.

A token vector concatenates five one-hot blocks, in order t_u, t_v, l_u, l_uv, l_v. Each block
holds the real symbols followed by one EOS token. The start-of-sequence input is the all-zeros
vector.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..canon.code import DfsCode
from ..canon.tuples import EdgeTuple
from ..errors import VocabularyError
from ..graphs.alias import FloatArray, IntArray
from ..graphs.dataset import GraphDataset
from ..graphs.fields import GraphField
from ..graphs.labels import LabelVocabulary

COMPONENTS: tuple[str, ...] = ("t_u", "t_v", "l_u", "l_uv", "l_v")


@dataclass(frozen=True)
class Vocabulary:
    """Symbol spaces shared by every dataset a model sees."""

    max_timestamp: int
    node_labels: LabelVocabulary
    edge_labels: LabelVocabulary

    def __post_init__(self) -> None:
        if self.max_timestamp < 1 or not len(self.node_labels) or not len(self.edge_labels):
            raise VocabularyError("Every component needs at least one real symbol")

    @property
    def sizes(self) -> tuple[int, ...]:
        """Block size per component, EOS included."""
        n_ts = self.max_timestamp + 1
        n_node = len(self.node_labels) + 1
        return n_ts, n_ts, n_node, len(self.edge_labels) + 1, n_node

    @property
    def offsets(self) -> tuple[int, ...]:
        """Start of each block in the concatenated vector."""
        return tuple(int(x) for x in np.concatenate(([0], np.cumsum(self.sizes)[:-1])))

    @property
    def total_size(self) -> int:
        """Length of a token vector."""
        return sum(self.sizes)

    @property
    def eos(self) -> tuple[int, ...]:
        """EOS index within each block."""
        return tuple(size - 1 for size in self.sizes)

    def tuple_indices(self, t: EdgeTuple) -> tuple[int, ...]:
        """Block-local token index of each component, checked against the block sizes."""
        for name, value, size in zip(COMPONENTS, t, self.sizes):
            if not 0 <= value < size - 1:
                raise VocabularyError(f"{name}={value} outside vocabulary of {size - 1}")
        return tuple(t)

    def code_indices(self, code: DfsCode | Sequence[EdgeTuple]) -> IntArray:
        """
        Token indices of the m + 1 targets of a code: s_1..s_m then EOS.

        Row i is both the target of step i and (for i < m) the input of step i + 1.
        """
        rows = [self.tuple_indices(t) for t in code]
        rows.append(self.eos)
        return np.asarray(rows, dtype=np.int64)

    def fits(self, dataset: GraphDataset) -> bool:
        """True when every graph of the dataset can be encoded."""
        return (
            all(text in self.node_labels for text in dataset.node_labels)
            and all(text in self.edge_labels for text in dataset.edge_labels)
            and (dataset.max(GraphField.NODES) or 0) <= self.max_timestamp
        )

    def adopt(self, dataset: GraphDataset) -> GraphDataset:
        """Re-express a dataset in this vocabulary's label ids."""
        if not self.fits(dataset):
            raise VocabularyError(f"Dataset {dataset.name!r} does not fit the model vocabulary")
        return dataset.relabel(self.node_labels, self.edge_labels)


def build_vocabulary(datasets: Sequence[GraphDataset]) -> Vocabulary:
    """Union of label vocabularies, in dataset order, and the largest node count."""
    if not datasets:
        raise VocabularyError("build_vocabulary needs at least one dataset")
    node_labels = datasets[0].node_labels
    edge_labels = datasets[0].edge_labels
    for d in datasets[1:]:
        node_labels = node_labels.union(d.node_labels)
        edge_labels = edge_labels.union(d.edge_labels)
    max_nodes = max((d.max(GraphField.NODES) or 0) for d in datasets)
    return Vocabulary(max_nodes, node_labels, edge_labels)


def encode_tuple(t: EdgeTuple, v: Vocabulary) -> FloatArray:
    """Concatenated one-hot token vector of a tuple."""
    vec = np.zeros(v.total_size, dtype=np.float64)
    for offset, index in zip(v.offsets, v.tuple_indices(t)):
        vec[offset + index] = 1.0
    return vec


def decode_tuple(x: FloatArray, v: Vocabulary) -> EdgeTuple:
    """Inverse of `encode_tuple`; EOS blocks are rejected."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (v.total_size,):
        raise VocabularyError(f"Token vector of shape {x.shape}, expected ({v.total_size},)")
    values = []
    for name, offset, size in zip(COMPONENTS, v.offsets, v.sizes):
        block = x[offset:offset + size]
        hot = np.flatnonzero(block)
        if len(hot) != 1 or block[hot[0]] != 1.0:
            raise VocabularyError(f"Block {name} is not one-hot")
        if hot[0] == size - 1:
            raise VocabularyError(f"Block {name} holds EOS")
        values.append(int(hot[0]))
    return EdgeTuple(*values)


def one_hot_rows(indices: IntArray, v: Vocabulary) -> FloatArray:
    """Token vectors for rows of block-local indices, shape (..., total_size)."""
    out = np.zeros(indices.shape[:-1] + (v.total_size,), dtype=np.float64)
    for k, offset in enumerate(v.offsets):
        np.put_along_axis(out, offset + indices[..., k:k + 1], 1.0, axis=-1)
    return out
