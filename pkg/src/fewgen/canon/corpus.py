"""Batch canonization of datasets into code corpora."""

from __future__ import annotations

import logging
from dataclasses import dataclass

from ..graphs.dataset import GraphDataset
from ..graphs.graph import LabeledGraph
from ..parallel import apply_parallel
from .code import DfsCode
from .min_code import min_dfs_code
from .tuples import LabelOrder

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CodeCorpus:
    """The minimum codes of one dataset, in dataset order."""

    name: str
    codes: tuple[DfsCode, ...]

    def __len__(self) -> int:
        return len(self.codes)


def canonize_dataset(
    dataset: GraphDataset,
    workers: int = 1,
    label_order: LabelOrder = LabelOrder.ID,
) -> CodeCorpus:
    """Minimum DFS code of every graph."""

    def canonize(g: LabeledGraph) -> DfsCode:
        if label_order is LabelOrder.ID:
            return g.min_code()
        return min_dfs_code(g, label_order)

    codes = apply_parallel(dataset.graphs, canonize, workers)
    logger.info("Canonized %d graphs of %r", len(codes), dataset.name)
    return CodeCorpus(dataset.name, tuple(codes))
