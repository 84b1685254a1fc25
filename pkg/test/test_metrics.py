"""
Tests for statistic histograms, kernels, MMD, orbit counts, NSPDK features,
novelty and uniqueness, and the full metric report.

Orbit counts are checked against template matching with networkx.
"""

import math

import numpy as np
import pytest

from fewgen.graphs import LabelVocabulary, make_graph, permute_graph
from fewgen.metrics import (
    GaussianEMDKernel,
    GaussianTVKernel,
    KernelKind,
    KernelSpec,
    LinearKernel,
    MetricReport,
    clustering_hist,
    degree_hist,
    evaluate,
    mmd,
    novelty,
    nspdk_features,
    nspdk_mmd,
    orbit_counts,
    ordered_histogram,
    total_variation,
    uniqueness,
    uniqueness_keep_one,
    wasserstein_1d,
)
from fewgen.metrics.histogram import Histogram

from _graph_test_util import (
    brute_force_orbits,
    complete_graph,
    dataset_of,
    path_graph,
    random_graph,
    star_graph,
)


def test_star_degree_histogram():
    """A star with four leaves has 80% degree 1 and 20% degree 4."""
    # Arrange
    g = star_graph(4)

    # Act
    h = degree_hist(g)

    # Assert
    np.testing.assert_allclose(h.values, [0.0, 0.8, 0.0, 0.0, 0.2])
    assert h.ordered and h.is_normalized, "Normalized ordered histogram"


def test_small_degree_histograms(single_edge):
    """A single edge has all mass on degree 1; a triangle on degree 2."""
    # Arrange, Act and Assert
    np.testing.assert_allclose(degree_hist(single_edge).values, [0.0, 1.0])
    np.testing.assert_allclose(degree_hist(complete_graph(3)).values, [0.0, 0.0, 1.0])


def test_transport_distance_hand_cases():
    """Moving half the mass one bin costs 0.5; point masses d apart cost d."""
    # Arrange
    half = ordered_histogram([0.5, 0.5])
    left = ordered_histogram([1.0, 0.0])
    at_zero = ordered_histogram([1.0])
    at_three = ordered_histogram([0.0, 0.0, 0.0, 1.0])

    # Act and Assert
    assert wasserstein_1d(half, left) == pytest.approx(0.5)
    assert wasserstein_1d(at_zero, at_three) == pytest.approx(3.0), "Shorter histogram padded"
    kernel = GaussianEMDKernel(sigma=2.0)
    assert kernel(at_zero, at_three) == pytest.approx(math.exp(-9.0 / 8.0))


def test_transport_distance_scales_with_bin_width():
    """Bins of width 0.1 shrink the distance tenfold."""
    # Arrange
    a = ordered_histogram([1.0, 0.0], bin_width=0.1)
    b = ordered_histogram([0.0, 1.0], bin_width=0.1)

    # Act and Assert
    assert wasserstein_1d(a, b) == pytest.approx(0.1)
    with pytest.raises(ValueError):
        wasserstein_1d(a, ordered_histogram([0.0, 1.0]))


def test_transport_kernel_needs_normalized_input():
    """Unnormalized histograms are rejected by the transport kernel."""
    # Arrange
    h = ordered_histogram([2.0, 1.0])

    # Act and Assert
    with pytest.raises(ValueError):
        GaussianEMDKernel()(h, h)


def test_total_variation():
    """Half the L1 distance over the union of keys."""
    # Arrange
    a = Histogram.from_counts({"a": 1.0})
    b = Histogram.from_counts({"a": 0.5, "b": 0.5})
    c = Histogram.from_counts({"c": 1.0})

    # Act and Assert
    assert total_variation(a, b) == pytest.approx(0.5)
    assert total_variation(a, c) == pytest.approx(1.0), "Disjoint supports"
    assert GaussianTVKernel()(a, a) == 1.0, "Identical histograms"


def test_clustering_bins():
    """Triangles fill the last bin, trees the first."""
    # Arrange/Act
    triangle = clustering_hist(complete_graph(3))
    tree = clustering_hist(star_graph(3))

    # Assert
    assert triangle.values[99] == 1.0 and triangle.values.sum() == 1.0, "Coefficient 1"
    assert tree.values[0] == 1.0, "Coefficient 0"
    assert triangle.bin_width == pytest.approx(0.01), "Bins of width 1/100"


def test_square_with_diagonal_clustering():
    """Degree-3 nodes have coefficient 2/3, degree-2 nodes coefficient 1."""
    # Arrange
    g = make_graph(["A"] * 4, [(0, 1, "_"), (1, 2, "_"), (2, 3, "_"), (0, 3, "_"), (0, 2, "_")])

    # Act
    h = clustering_hist(g)

    # Assert
    assert h.values[66] == pytest.approx(0.5), "Two nodes at 2/3"
    assert h.values[99] == pytest.approx(0.5), "Two nodes at 1"


def test_path_orbits():
    """The ends of a 4-path sit on orbit 0, the middle nodes on orbit 1."""
    # Arrange
    g = path_graph(4)

    # Act
    counts = orbit_counts(g)

    # Assert
    assert counts[:, 0].tolist() == [1, 0, 0, 1], "End nodes"
    assert counts[:, 1].tolist() == [0, 1, 1, 0], "Middle nodes"
    assert counts.sum() == 4, "One graphlet, four nodes"


def test_small_graphs_have_no_orbits(triangle):
    """Graphs under four nodes have all-zero orbit counts."""
    # Arrange/Act
    counts = orbit_counts(triangle)

    # Assert
    assert counts.shape == (3, 11) and not counts.any(), "No 4-node graphlets"


def test_complete_graph_orbits():
    """Every node of K5 lies in four K4 graphlets."""
    # Arrange
    g = complete_graph(5)

    # Act
    counts = orbit_counts(g)

    # Assert
    assert counts[:, 10].tolist() == [4] * 5, "Four 4-cliques per node"
    np.testing.assert_array_equal(counts, brute_force_orbits(g))


def test_orbits_match_template_matching():
    """Random graphs up to ten nodes agree with networkx template matching."""
    # Arrange
    rng = np.random.default_rng(31)
    graphs = [random_graph(rng, int(rng.integers(4, 11)), p=0.3) for _ in range(25)]

    # Act
    mismatches = [g for g in graphs if not np.array_equal(orbit_counts(g), brute_force_orbits(g))]

    # Assert
    assert not mismatches, f"{len(mismatches)} graphs disagree with template matching"


def test_mmd_axioms():
    """Zero on identical sets, symmetric and non-negative."""
    # Arrange
    a = [degree_hist(g) for g in (star_graph(3), path_graph(4), complete_graph(4))]
    b = [degree_hist(g) for g in (path_graph(5), star_graph(2))]
    kernel = GaussianEMDKernel()

    # Act
    same = mmd(a, a, kernel)
    ab = mmd(a, b, kernel)
    ba = mmd(b, a, kernel)

    # Assert
    assert same == pytest.approx(0.0, abs=1e-12), "MMD of a set with itself"
    assert ab == pytest.approx(ba, rel=1e-12), "Symmetry"
    assert ab > 0.0, "Different sets are apart"


def test_singleton_mmd_closed_form():
    """For singletons and a unit-diagonal kernel MMD is 2 - 2 k(x, y)."""
    # Arrange
    x = degree_hist(star_graph(3))
    y = degree_hist(path_graph(4))
    spec = KernelSpec(KernelKind.GAUSSIAN_EMD, sigma=1.0)

    # Act
    value = mmd([x], [y], spec)

    # Assert
    assert value == pytest.approx(2.0 - 2.0 * GaussianEMDKernel(1.0)(x, y))


def test_mmd_needs_nonempty_sets():
    """An empty statistic set is an error."""
    # Arrange
    h = ordered_histogram([1.0])

    # Act and Assert
    with pytest.raises(ValueError):
        mmd([], [h], LinearKernel())


def test_nspdk_features_are_normalized_and_invariant(labeled_path):
    """Feature maps have unit norm and do not depend on node numbering."""
    # Arrange
    permuted = permute_graph(labeled_path, [2, 3, 1, 0])

    # Act
    f = nspdk_features(labeled_path)
    g = nspdk_features(permuted)

    # Assert
    assert sum(v * v for v in f.values()) == pytest.approx(1.0), "Unit norm"
    assert f == g, "Node renaming changed the features"


def test_single_edge_nspdk_features(single_edge):
    """Radius and distance 1 on one edge give eight features of equal weight."""
    # Arrange/Act
    f = nspdk_features(single_edge, max_radius=1, max_distance=1)

    # Assert
    assert len(f) == 8, "Four ordered pairs times two radii"
    np.testing.assert_allclose(list(f.values()), 1.0 / math.sqrt(8.0))


def test_nspdk_mmd(labeled_path, small_dataset):
    """Zero on identical sets; 2 - 2<f, g> for two singletons."""
    # Arrange
    a, b = small_dataset.graphs[1], small_dataset.graphs[2]
    fa, fb = nspdk_features(a), nspdk_features(b)
    dot = sum(v * fb.get(k, 0.0) for k, v in fa.items())

    # Act
    same = nspdk_mmd([labeled_path], [labeled_path])
    apart = nspdk_mmd([a], [b])

    # Assert
    assert same == pytest.approx(0.0, abs=1e-12), "Identical sets"
    assert apart == pytest.approx(2.0 - 2.0 * dot), "Singleton closed form"


def test_novelty(small_dataset):
    """Training graphs are never novel; a label absent from training always is."""
    # Arrange
    vocab = small_dataset.node_labels, small_dataset.edge_labels
    fresh = make_graph(["C", "C"], [(0, 1, "x")], *vocab)
    seen = make_graph(["A", "B"], [(0, 1, "x")], *vocab)

    # Act and Assert
    assert novelty(small_dataset.graphs, small_dataset.graphs) == 0.0
    assert novelty([fresh], [seen]) == 100.0
    assert novelty([seen], small_dataset.graphs) == 0.0, "Embeds into a training graph"


def _label_graphs():
    """Shared vocabulary of labels L0..L9 and X, with builders for edges and paths."""
    labels = LabelVocabulary(tuple(f"L{i}" for i in range(10)) + ("X",))
    edges = LabelVocabulary(("_",))

    def edge(i):
        return make_graph([f"L{i}", "X"], [(0, 1, "_")], labels, edges)

    def path(i):
        return make_graph([f"L{i}", "X", f"L{i}"], [(0, 1, "_"), (1, 2, "_")], labels, edges)

    return edge, path


def test_uniqueness_construction():
    """Ten 3-paths survive; the ninety edges they contain do not."""
    # Arrange
    edge, path = _label_graphs()
    graphs = []
    for i in range(10):
        graphs.append(path(i))
        graphs.extend(edge(i) for _ in range(9))

    # Act
    literal = uniqueness(graphs)
    keep_one = uniqueness_keep_one(graphs)

    # Assert
    assert literal == pytest.approx(10.0), "Only the paths survive"
    assert keep_one == pytest.approx(10.0), "Edges embed into the larger paths"


def test_uniqueness_of_distinct_and_copied_graphs():
    """Distinct graphs are all unique; copies remove each other unless one is kept."""
    # Arrange
    edge, _ = _label_graphs()
    distinct = [edge(i) for i in range(5)]
    copies = [edge(0)] * 4

    # Act and Assert
    assert uniqueness(distinct) == 100.0
    assert uniqueness(copies) == 0.0, "Copies embed into each other"
    assert uniqueness_keep_one(copies) == pytest.approx(25.0), "The first copy stays"


def test_evaluate_against_itself(spring4):
    """A set compared with itself has zero MMDs and no novelty; edge labels are N/A."""
    # Arrange
    d = spring4.subset(range(8))

    # Act
    report = evaluate(d, d, d)

    # Assert
    for name in ("degree_mmd", "clustering_mmd", "orbit_mmd", "nspdk_mmd", "node_label_mmd"):
        assert getattr(report, name) == pytest.approx(0.0, abs=1e-10), name
    assert report.edge_label_mmd is None, "Unlabeled edges"
    assert report.novelty_pct == 0.0, "Everything is a training graph"
    assert report.avg_nodes_gen == report.avg_nodes_ref == 4.0
    assert "edge_label_mmd\tN/A" in report.to_text().splitlines()


def test_evaluate_labeled(small_dataset):
    """Labeled edges give a numeric edge-label MMD."""
    # Arrange/Act
    report = evaluate(small_dataset, small_dataset, small_dataset)

    # Assert
    assert report.edge_label_mmd == pytest.approx(0.0, abs=1e-10), "Labeled edges"
    assert list(report.to_dict()) == MetricReport.metric_names(), "Field order"


def test_evaluate_needs_graphs(small_dataset):
    """An empty generated set cannot be evaluated."""
    # Arrange
    empty = dataset_of([small_dataset.graphs[0]]).subset([])

    # Act and Assert
    with pytest.raises(ValueError):
        evaluate(empty, small_dataset, small_dataset)
