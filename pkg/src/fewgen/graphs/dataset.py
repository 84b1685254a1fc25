"""
Graph datasets and the transaction text format.

A dataset is an ordered collection of labeled graphs sharing one node-label vocabulary and
one edge-label vocabulary. The text format is the gSpan transaction format:

    t # 0
    v 0 A
    v 1 B
    e 0 1 x

Edge label `_` marks unlabeled edges. Comment lines start with `#`. Two comment directives,
`# node-labels: ...` and `# edge-labels: ...`, fix the vocabulary order when it differs from
the first-appearance order of the labels; `write_dataset` emits them only when needed.
"""

from __future__ import annotations

import logging
import pathlib
import statistics
from dataclasses import dataclass
from typing import Any, Callable, Iterator, Optional

from ..errors import GraphFormatError, InvalidGraphError, VocabularyError
from .alias import StrOrPath
from .fields import GraphField
from .graph import LabeledGraph
from .labels import UNLABELED_EDGE, LabelVocabulary

logger = logging.getLogger(__name__)

NODE_DIRECTIVE = "# node-labels:"
EDGE_DIRECTIVE = "# edge-labels:"


@dataclass(frozen=True)
class GraphDataset:
    """
    A named, ordered collection of graphs over shared label vocabularies.

    Parsed datasets always hold at least one graph; partitions produced by `split_dataset`
    may be empty.
    """

    name: str
    graphs: tuple[LabeledGraph, ...]
    node_labels: LabelVocabulary
    edge_labels: LabelVocabulary

    def __post_init__(self) -> None:
        object.__setattr__(self, "graphs", tuple(self.graphs))
        for i, g in enumerate(self.graphs):
            if g.node_labels != self.node_labels or g.edge_labels != self.edge_labels:
                raise VocabularyError(
                    f"Graph {i} of dataset {self.name!r} uses different label vocabularies"
                )

    def __len__(self) -> int:
        return len(self.graphs)

    def __iter__(self) -> Iterator[LabeledGraph]:
        return iter(self.graphs)

    def __getitem__(self, index: int) -> LabeledGraph:
        return self.graphs[index]

    @property
    def is_unlabeled(self) -> bool:
        """True for datasets without edge labels."""
        return self.edge_labels.is_unlabeled

    def _get_key(self, field: GraphField) -> Callable[[LabeledGraph], int]:
        """Return the per-graph accessor of a field."""
        if field == GraphField.NODES:
            return lambda g: g.num_nodes
        elif field == GraphField.EDGES:
            return lambda g: g.num_edges
        elif field == GraphField.MAX_DEGREE:
            return lambda g: max(g.degrees())
        else:
            raise ValueError(f"Unknown field: {field}")

    def values(self, field: GraphField) -> list[int]:
        """Per-graph values of a field, in dataset order."""
        key = self._get_key(field)
        return [key(g) for g in self.graphs]

    def max(self, field: GraphField) -> Optional[Any]:
        """Return the maximum of a field over the dataset."""
        vals = self.values(field)
        return max(vals) if vals else None

    def min(self, field: GraphField) -> Optional[Any]:
        """Return the minimum of a field over the dataset."""
        vals = self.values(field)
        return min(vals) if vals else None

    def average(self, field: GraphField) -> Optional[float]:
        """Return the mean of a field over the dataset."""
        vals = self.values(field)
        return statistics.mean(vals) if vals else None

    def median(self, field: GraphField) -> Optional[float]:
        """Return the median of a field over the dataset."""
        vals = self.values(field)
        return statistics.median(vals) if vals else None

    def subset(self, indices: list[int] | range, name: str | None = None) -> "GraphDataset":
        """A dataset holding the graphs at `indices`, same vocabularies."""
        return GraphDataset(
            name=name or self.name,
            graphs=tuple(self.graphs[i] for i in indices),
            node_labels=self.node_labels,
            edge_labels=self.edge_labels,
        )

    def relabel(
        self,
        node_labels: LabelVocabulary,
        edge_labels: LabelVocabulary,
    ) -> "GraphDataset":
        """Re-express every graph in larger vocabularies."""
        return GraphDataset(
            name=self.name,
            graphs=tuple(g.relabel(node_labels, edge_labels) for g in self.graphs),
            node_labels=node_labels,
            edge_labels=edge_labels,
        )


def unify_datasets(*datasets: GraphDataset) -> tuple[GraphDataset, ...]:
    """Relabel datasets onto the union of their vocabularies, in argument order."""
    if not datasets:
        return ()
    node_labels = datasets[0].node_labels
    edge_labels = datasets[0].edge_labels
    for d in datasets[1:]:
        node_labels = node_labels.union(d.node_labels)
        edge_labels = edge_labels.union(d.edge_labels)
    return tuple(d.relabel(node_labels, edge_labels) for d in datasets)


@dataclass
class _GraphRecord:
    """Raw texts of one graph while parsing."""

    lineno: int
    nodes: list[str]
    edges: list[tuple[int, int, str, int]]


def parse_dataset(
    text: str,
    unlabeled_edges: bool = False,
    name: str = "dataset",
) -> GraphDataset:
    """
    Parse transaction-format text into a validated dataset.

    With `unlabeled_edges` the edge-label token is optional and every edge gets the `_`
    sentinel label. Vocabularies are built in first-appearance order unless a label
    directive fixes the order.
    """
    records: list[_GraphRecord] = []
    node_order: list[str] = []
    edge_order: list[str] = []
    current: _GraphRecord | None = None

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith(NODE_DIRECTIVE):
            node_order.extend(line[len(NODE_DIRECTIVE):].split())
            continue
        if line.startswith(EDGE_DIRECTIVE):
            edge_order.extend(line[len(EDGE_DIRECTIVE):].split())
            continue
        if line.startswith("#"):
            continue
        tokens = line.split()
        kind = tokens[0]
        if kind == "t":
            if len(tokens) != 3 or tokens[1] != "#":
                raise GraphFormatError("expected 't # <graph-id>'", lineno)
            graph_id = _parse_int(tokens[2], lineno)
            if graph_id == -1:
                break
            current = _GraphRecord(lineno=lineno, nodes=[], edges=[])
            records.append(current)
            continue
        tokens = _strip_comment(tokens)
        if current is None:
            raise GraphFormatError(f"record {kind!r} before the first 't' line", lineno)
        if kind == "v":
            if len(tokens) != 3:
                raise GraphFormatError("expected 'v <node-id> <node-label>'", lineno)
            node_id = _parse_int(tokens[1], lineno)
            if node_id != len(current.nodes):
                raise GraphFormatError(
                    f"node ids must be 0-based and contiguous, expected {len(current.nodes)}"
                    f" got {node_id}",
                    lineno,
                )
            current.nodes.append(tokens[2])
        elif kind == "e":
            current.edges.append(_parse_edge(tokens, unlabeled_edges, current, lineno))
        else:
            raise GraphFormatError(f"unknown record type {kind!r}", lineno)

    if not records:
        raise GraphFormatError("no graphs in input")

    node_labels = LabelVocabulary.from_texts(
        [*node_order, *(t for r in records for t in r.nodes)]
    )
    edge_labels = LabelVocabulary.from_texts(
        [*edge_order, *(e[2] for r in records for e in r.edges)]
    )
    graphs = tuple(_build_graph(r, node_labels, edge_labels) for r in records)
    logger.debug("Parsed dataset %r with %d graphs", name, len(graphs))
    return GraphDataset(name, graphs, node_labels, edge_labels)


def _parse_int(token: str, lineno: int) -> int:
    try:
        return int(token)
    except ValueError as exc:
        raise GraphFormatError(f"expected an integer, got {token!r}", lineno) from exc


def _strip_comment(tokens: list[str]) -> list[str]:
    for i, token in enumerate(tokens):
        if token.startswith("#"):
            return tokens[:i]
    return tokens


def _parse_edge(
    tokens: list[str],
    unlabeled_edges: bool,
    current: _GraphRecord,
    lineno: int,
) -> tuple[int, int, str, int]:
    if unlabeled_edges and len(tokens) in (3, 4):
        label = UNLABELED_EDGE
    elif len(tokens) == 4:
        label = tokens[3]
    else:
        raise GraphFormatError("expected 'e <u> <v> <edge-label>'", lineno)
    u = _parse_int(tokens[1], lineno)
    v = _parse_int(tokens[2], lineno)
    if u == v:
        raise GraphFormatError(f"self-loop on node {u}", lineno)
    key = (min(u, v), max(u, v))
    if any((min(a, b), max(a, b)) == key for a, b, _, _ in current.edges):
        raise GraphFormatError(f"duplicate edge ({u}, {v})", lineno)
    return u, v, label, lineno


def _build_graph(
    record: _GraphRecord,
    node_labels: LabelVocabulary,
    edge_labels: LabelVocabulary,
) -> LabeledGraph:
    n = len(record.nodes)
    for u, v, _, lineno in record.edges:
        if not (0 <= u < n and 0 <= v < n):
            raise GraphFormatError(f"dangling node index in edge ({u}, {v})", lineno)
    try:
        return LabeledGraph(
            nodes=tuple(node_labels.id_of(t) for t in record.nodes),
            edges=tuple((u, v, edge_labels.id_of(t)) for u, v, t, _ in record.edges),
            node_labels=node_labels,
            edge_labels=edge_labels,
        )
    except InvalidGraphError as exc:
        raise GraphFormatError(str(exc), record.lineno) from exc


def write_dataset(d: GraphDataset) -> str:
    """Serialize a dataset canonically; `parse_dataset` of the result equals `d`."""
    lines: list[str] = []
    appearance_nodes = LabelVocabulary.from_texts(
        d.node_labels.texts[label] for g in d.graphs for label in g.nodes
    )
    appearance_edges = LabelVocabulary.from_texts(
        d.edge_labels.texts[e[2]] for g in d.graphs for e in g.edges
    )
    if appearance_nodes != d.node_labels:
        lines.append(f"{NODE_DIRECTIVE} {' '.join(d.node_labels.texts)}")
    if appearance_edges != d.edge_labels:
        lines.append(f"{EDGE_DIRECTIVE} {' '.join(d.edge_labels.texts)}")
    for graph_id, g in enumerate(d.graphs):
        lines.append(f"t # {graph_id}")
        lines.extend(f"v {i} {d.node_labels.texts[label]}" for i, label in enumerate(g.nodes))
        lines.extend(f"e {u} {v} {d.edge_labels.texts[label]}" for u, v, label in g.edges)
    return "\n".join(lines) + "\n"


def read_dataset(
    path: StrOrPath,
    unlabeled_edges: bool = False,
    name: str | None = None,
) -> GraphDataset:
    """Read a transaction-format file; the dataset name defaults to the file stem."""
    path = pathlib.Path(path)
    text = path.read_text(encoding="utf-8")
    return parse_dataset(text, unlabeled_edges=unlabeled_edges, name=name or path.stem)


def save_dataset(d: GraphDataset, path: StrOrPath) -> pathlib.Path:
    """Write a dataset file with LF line endings."""
    path = pathlib.Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="\n") as handle:
        handle.write(write_dataset(d))
    return path
