"""Labeled graphs, datasets, file format, splitting and synthetic data."""

from .dataset import GraphDataset, parse_dataset, read_dataset, save_dataset, unify_datasets
from .dataset import write_dataset
from .fields import GraphField
from .graph import LabeledGraph, make_graph, permute_graph
from .isomorphism import is_isomorphic, is_subgraph
from .labels import UNLABELED_EDGE, LabelVocabulary
from .split import SplitSpec, split_dataset
from .spring import synth_spring

__all__ = [
    "GraphDataset",
    "GraphField",
    "LabeledGraph",
    "LabelVocabulary",
    "SplitSpec",
    "UNLABELED_EDGE",
    "is_isomorphic",
    "is_subgraph",
    "make_graph",
    "parse_dataset",
    "permute_graph",
    "read_dataset",
    "save_dataset",
    "split_dataset",
    "synth_spring",
    "unify_datasets",
    "write_dataset",
]
