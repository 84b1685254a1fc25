"""
Autoregressive sampling of tuple sequences and batch graph generation.

Every step feeds the previous tuple (all zeros at the start) through the model and draws the
five components independently from their softmax distributions. A draw of EOS in any component
ends the sequence and that tuple is discarded.
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from ..canon.decode import code_to_graph
from ..canon.repair import RepairMode, repair_code
from ..canon.tuples import EdgeTuple
from ..errors import InvalidCodeError, VocabularyError
from ..graphs.alias import FloatArray
from ..graphs.dataset import GraphDataset
from ..graphs.graph import LabeledGraph
from ..model.network import HiddenState, forward_step, softmax
from ..model.params import ModelParams
from ..model.vocabulary import Vocabulary
from ..parallel import apply_parallel
from .config import BUDGET_FACTOR, GenerationConfig

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SampledSequence:
    """Raw sampled tuples; `truncated` when the length cap ended the sequence."""

    tuples: tuple[EdgeTuple, ...]
    truncated: bool = False


def _draw(p: FloatArray, rng: np.random.Generator) -> int:
    cdf = np.cumsum(p)
    index = int(np.searchsorted(cdf, rng.random() * cdf[-1], side="right"))
    return min(index, len(p) - 1)


def resolve_max_tuples(gc: GenerationConfig, v: Vocabulary) -> int:
    """The configured cap, else the edge count of a complete graph on every timestamp."""
    if gc.max_tuples is not None:
        return gc.max_tuples
    n = v.max_timestamp
    return max(1, n * (n - 1) // 2)


def sample_sequence(
    params: ModelParams,
    v: Vocabulary,
    gc: GenerationConfig,
    rng: np.random.Generator,
) -> SampledSequence:
    """Draw one raw tuple sequence from the model."""
    if params.vocab != v:
        raise VocabularyError("Model parameters were built for a different vocabulary")
    limit = resolve_max_tuples(gc, v)
    state = HiddenState.zeros(params)
    x = np.zeros(v.total_size)
    tuples: list[EdgeTuple] = []
    while len(tuples) < limit:
        state, logits = forward_step(params, state, x)
        indices = [_draw(softmax(z / gc.temperature), rng) for z in logits]
        if any(i == eos for i, eos in zip(indices, v.eos)):
            return SampledSequence(tuple(tuples))
        tuples.append(EdgeTuple(*indices))
        x = np.zeros(v.total_size)
        x[np.asarray(v.offsets) + np.asarray(indices)] = 1.0
    return SampledSequence(tuple(tuples), truncated=True)


@dataclass
class GenerationReport:
    """
    Accounting of every sampling attempt.

    `emitted + rejected == attempts` always holds; `truncated` counts attempts that hit the
    length cap, whatever happened to them afterwards.
    """

    requested: int
    attempts: int = 0
    emitted: int = 0
    rejected: int = 0
    truncated: int = 0
    reasons: Counter = field(default_factory=Counter)

    @property
    def complete(self) -> bool:
        """True when the requested number of graphs was emitted."""
        return self.emitted >= self.requested

    @property
    def rejection_rate(self) -> float:
        """Share of attempts that were rejected."""
        return self.rejected / self.attempts if self.attempts else 0.0

    def reject(self, reason: str) -> None:
        """Count one rejected attempt."""
        self.attempts += 1
        self.rejected += 1
        self.reasons[reason] += 1

    def emit(self) -> None:
        """Count one emitted graph."""
        self.attempts += 1
        self.emitted += 1

    def merge(self, other: "GenerationReport") -> "GenerationReport":
        """Combined report of two disjoint runs."""
        return GenerationReport(
            self.requested + other.requested,
            self.attempts + other.attempts,
            self.emitted + other.emitted,
            self.rejected + other.rejected,
            self.truncated + other.truncated,
            self.reasons + other.reasons,
        )

    def to_tsv(self) -> str:
        """Counts then one `reason:<name>` line per rejection reason, tab-separated."""
        rows = [
            ("requested", self.requested),
            ("attempts", self.attempts),
            ("emitted", self.emitted),
            ("rejected_invalid", self.rejected),
            ("rejection_rate", f"{self.rejection_rate:.6g}"),
            ("truncated", self.truncated),
            ("complete", int(self.complete)),
        ]
        rows.extend((f"reason:{name}", n) for name, n in sorted(self.reasons.items()))
        return "".join(f"{key}\t{value}\n" for key, value in rows)


def _run_chain(
    params: ModelParams,
    v: Vocabulary,
    gc: GenerationConfig,
    quota: int,
    seed: np.random.SeedSequence,
) -> tuple[list[LabeledGraph], GenerationReport]:
    rng = np.random.default_rng(seed)
    report = GenerationReport(quota)
    graphs: list[LabeledGraph] = []
    while report.emitted < quota and report.attempts < BUDGET_FACTOR * quota:
        sampled = sample_sequence(params, v, gc, rng)
        if sampled.truncated:
            report.truncated += 1
            if gc.repair is RepairMode.STRICT:
                report.reject("truncated")
                continue
        repaired = repair_code(sampled.tuples, gc.repair)
        if repaired.code is None:
            report.reject(repaired.reason or "invalid")
            continue
        try:
            graph = code_to_graph(repaired.code, v.node_labels, v.edge_labels)
        except InvalidCodeError:
            report.reject("decode")
            continue
        graphs.append(graph)
        report.emit()
    return graphs, report


def chain_quotas(count: int, chains: int) -> list[int]:
    """Split `count` over chains, earlier chains taking the remainder."""
    base, extra = divmod(count, chains)
    return [base + (1 if i < extra else 0) for i in range(chains)]


def generate_graphs(
    params: ModelParams,
    v: Vocabulary,
    gc: GenerationConfig,
    workers: int = 1,
    name: str = "generated",
) -> tuple[GraphDataset, GenerationReport]:
    """
    Sample, repair and decode until `gc.count` graphs are emitted or the attempt budget of ten
    attempts per requested graph runs out.

    Each chain has its own seed stream; graphs are ordered by chain, then by draw. An
    exhausted budget returns the partial dataset with an incomplete report.
    """
    seeds = np.random.SeedSequence(gc.seed).spawn(gc.chains)
    jobs = [(q, s) for q, s in zip(chain_quotas(gc.count, gc.chains), seeds) if q]
    results = apply_parallel(jobs, lambda job: _run_chain(params, v, gc, *job), workers)
    graphs: list[LabeledGraph] = []
    report = GenerationReport(0)
    for chain_graphs, chain_report in results:
        graphs.extend(chain_graphs)
        report = report.merge(chain_report)
    if report.complete:
        logger.info(
            "Generated %d graphs in %d attempts (rejection rate %.3f)",
            report.emitted,
            report.attempts,
            report.rejection_rate,
        )
    else:
        logger.warning(
            "Attempt budget exhausted: %d of %d graphs generated",
            report.emitted,
            report.requested,
        )
    dataset = GraphDataset(name, tuple(graphs), v.node_labels, v.edge_labels)
    return dataset, report
