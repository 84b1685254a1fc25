"""
conftest.py - Pytest fixtures for the fewgen test suite.

This module provides reusable fixtures for graph, model and pipeline tests, including:
- small hand-made graphs (single edge, triangle, labeled path)
- seeded synthetic spring datasets
- model vocabularies and tiny randomly initialized models
- transaction-format dataset files on disk for command-line tests

All file fixtures use pytest's tmp_path for automatic cleanup.
"""

import pathlib

import pytest

from fewgen.graphs import GraphDataset, LabeledGraph, make_graph, save_dataset, synth_spring
from fewgen.model import ModelParams, Vocabulary, build_vocabulary

from _graph_test_util import dataset_of
from _model_test_util import tiny_params


@pytest.fixture
def single_edge() -> LabeledGraph:
    """The smallest legal graph: (A)-x-(B)."""
    # Arrange
    return make_graph(["A", "B"], [(0, 1, "x")])


@pytest.fixture
def triangle() -> LabeledGraph:
    """Triangle with three distinct node labels and two edge labels."""
    # Arrange
    return make_graph(["A", "B", "C"], [(0, 1, "x"), (1, 2, "y"), (0, 2, "x")])


@pytest.fixture
def labeled_path() -> LabeledGraph:
    """Path A-B-A-C with alternating edge labels."""
    # Arrange
    return make_graph(["A", "B", "A", "C"], [(0, 1, "x"), (1, 2, "y"), (2, 3, "x")])


@pytest.fixture
def small_dataset(single_edge, triangle, labeled_path) -> GraphDataset:
    """Three graphs over one shared vocabulary."""
    # Arrange
    node_labels = labeled_path.node_labels
    edge_labels = labeled_path.edge_labels
    graphs = [g.relabel(node_labels, edge_labels) for g in (single_edge, triangle, labeled_path)]
    return dataset_of(graphs, "small")


@pytest.fixture
def spring4() -> GraphDataset:
    """Twenty 4-particle spring graphs."""
    # Arrange
    return synth_spring(4, 20, seed=1)


@pytest.fixture
def spring5() -> GraphDataset:
    """Twenty 5-particle spring graphs."""
    # Arrange
    return synth_spring(5, 20, seed=2)


@pytest.fixture
def spring6() -> GraphDataset:
    """Ten 6-particle spring graphs."""
    # Arrange
    return synth_spring(6, 10, seed=3)


@pytest.fixture
def small_vocab(small_dataset) -> Vocabulary:
    """Model vocabulary of `small_dataset`."""
    # Arrange
    return build_vocabulary([small_dataset])


@pytest.fixture
def small_model(small_vocab) -> ModelParams:
    """Width-4 model over `small_vocab`."""
    # Arrange
    return tiny_params(small_vocab, seed=3)


@pytest.fixture
def spring_files(tmp_path: pathlib.Path, spring4, spring5, spring6) -> dict[str, pathlib.Path]:
    """The three spring datasets written as transaction files."""
    # Arrange
    folder = tmp_path / "data"
    return {d.name: save_dataset(d, folder / f"{d.name}.txt") for d in (spring4, spring5, spring6)}
