"""Tests for seeded dataset splits and synthetic spring datasets."""

import itertools
from fractions import Fraction

import networkx as nx
import numpy as np
import pytest

from fewgen.errors import ConfigError, InvalidGraphError
from fewgen.graphs import SplitSpec, spring, split_dataset, synth_spring

from _graph_test_util import dataset_of, path_graph


@pytest.fixture
def ten_graphs():
    """Ten distinct paths of 2..11 nodes."""
    # Arrange
    graphs = [path_graph(n) for n in range(2, 12)]
    return dataset_of(graphs, "paths")


def test_split_sizes_are_exact(ten_graphs):
    """(0.4, 0.3, 0.3) of ten graphs gives (4, 3, 3)."""
    # Arrange
    spec = SplitSpec(Fraction(2, 5), Fraction(3, 10), Fraction(3, 10), seed=5)

    # Act
    train, val, test = split_dataset(ten_graphs, spec)

    # Assert
    assert (len(train), len(val), len(test)) == (4, 3, 3), "Partition sizes"
    names = [train.name, val.name, test.name]
    assert names == ["paths-train", "paths-val", "paths-test"], "Partition names"
    assert sorted(g.num_nodes for d in (train, val, test) for g in d) == list(range(2, 12))


def test_split_is_deterministic(ten_graphs):
    """The same seed gives the same partitions."""
    # Arrange
    spec = SplitSpec(seed=11)

    # Act
    first = split_dataset(ten_graphs, spec)
    second = split_dataset(ten_graphs, spec)

    # Assert
    assert first == second, "Same seed must give identical partitions"


def test_split_everything_to_train(ten_graphs):
    """(1, 0, 0) puts every graph into train."""
    # Arrange
    spec = SplitSpec(1, 0, 0)

    # Act
    train, val, test = split_dataset(ten_graphs, spec)

    # Assert
    assert len(train) == 10 and not len(val) and not len(test), "All graphs go to train"


def test_split_fractions_accept_decimal_text():
    """Decimal fractions are read exactly."""
    # Arrange/Act
    spec = SplitSpec("0.5", "0.2", 0.3)

    # Assert
    assert spec.train == Fraction(1, 2), "Exact half"
    assert spec.test == Fraction(3, 10), "0.3 read as 3/10"


@pytest.mark.parametrize("fractions", [(0.5, 0.5, 0.5), (1.2, -0.1, -0.1)])
def test_split_spec_validation(fractions):
    """Fractions outside [0, 1] or not summing to 1 are configuration errors."""
    # Arrange, Act and Assert
    with pytest.raises(ConfigError):
        SplitSpec(*fractions)


def test_spring_defaults():
    """Default grid gives 25 node labels and unlabeled edges."""
    # Arrange/Act
    dataset = synth_spring(5, 10, seed=0)

    # Assert
    assert len(dataset.node_labels) == 25, "5x5 grid of cell labels"
    assert dataset.is_unlabeled, "Springs carry no edge labels"
    assert dataset.name == "spring-5", "Name carries the particle count"
    assert all(g.num_nodes == 5 for g in dataset), "Every graph has 5 particles"


def test_spring_two_particles_is_single_edge():
    """Connectivity forces the only pair of two particles to be joined."""
    # Arrange/Act
    dataset = synth_spring(2, 20, seed=3)

    # Assert
    assert all(g.num_edges == 1 for g in dataset), "Every sample is a single edge"


def test_spring_is_deterministic():
    """The same seed gives the same dataset."""
    # Arrange/Act
    first = synth_spring(6, 15, seed=42)
    second = synth_spring(6, 15, seed=42)

    # Assert
    assert first == second, "Synthesis must be deterministic"


def test_spring_rejects_bad_arguments():
    """Particle counts below two and zero edge probability are configuration errors."""
    # Arrange, Act and Assert
    with pytest.raises(ConfigError):
        synth_spring(1, 5)
    with pytest.raises(ConfigError):
        synth_spring(4, 5, edge_prob=0.0)


def test_spring_rejection_budget_is_per_graph(monkeypatch):
    """Rejections of earlier graphs do not count against later ones."""
    # Arrange
    monkeypatch.setattr(spring, "MAX_REJECTIONS", 500)

    # Act
    dataset = synth_spring(2, 60, edge_prob=0.05, seed=0)

    # Assert
    assert len(dataset) == 60, "About 20 draws per graph stays far below the budget"


def test_spring_gives_up_on_one_graph(monkeypatch):
    """A graph that exhausts its own budget is an error."""
    # Arrange
    monkeypatch.setattr(spring, "MAX_REJECTIONS", 50)

    # Act and Assert
    with pytest.raises(InvalidGraphError):
        synth_spring(4, 1, edge_prob=1e-9, seed=0)


def test_spring_edge_count_matches_connected_expectation():
    """Mean edge count equals Binomial(10, 1/2) conditioned on connectivity."""
    # Arrange
    pairs = list(itertools.combinations(range(5), 2))
    total = 0
    weighted = 0
    for mask in range(1 << len(pairs)):
        chosen = [pair for i, pair in enumerate(pairs) if mask >> i & 1]
        g = nx.Graph(chosen)
        g.add_nodes_from(range(5))
        if nx.is_connected(g):
            total += 1
            weighted += len(chosen)
    expected = weighted / total
    samples = 3000

    # Act
    dataset = synth_spring(5, samples, seed=9)
    counts = np.array([g.num_edges for g in dataset], dtype=float)

    # Assert
    stderr = counts.std() / np.sqrt(samples)
    assert abs(counts.mean() - expected) < 4 * stderr, "Empirical mean far from expectation"
