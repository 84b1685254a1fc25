"""
Minimum DFS codes.

`min_dfs_code` grows every DFS traversal in lock step, one tuple at a time, and after each
step keeps only the traversals whose newest tuple is the smallest one seen at that position.
A discarded traversal can never produce a smaller complete code, so the survivors after |E|
steps all carry the minimum code. `brute_force_min_code` enumerates complete traversals and
serves as the reference on small graphs.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Iterator

from ..errors import InvalidCodeError
from ..graphs.graph import LabeledGraph
from .code import DfsCode
from .tuples import CodeOrder, EdgeTuple, LabelOrder, LabelRanks, compare_codes, compare_tuples

BRUTE_FORCE_MAX_NODES = 8


@dataclass(frozen=True)
class _Traversal:
    """A partial DFS traversal."""

    stamps: dict[int, int]
    order: tuple[int, ...]
    path: tuple[int, ...]
    pending: tuple[EdgeTuple, ...]


def label_ranks(g: LabeledGraph, label_order: LabelOrder) -> LabelRanks | None:
    """Rank tables for `label_order`; None means plain id order."""
    if label_order is LabelOrder.ID:
        return None
    return LabelRanks(g.node_labels.symbol_ranks(), g.edge_labels.symbol_ranks())


def _closing_tuples(
    g: LabeledGraph,
    stamps: dict[int, int],
    node: int,
    parent: int,
) -> tuple:
    """Backward tuples from a just-discovered node, by increasing target timestamp."""
    targets = sorted(
        (stamps[s], s) for s in g.adjacency[node] if s in stamps and s != parent
    )
    return tuple(
        EdgeTuple(stamps[node], t_s, g.nodes[node], g.adjacency[node][s], g.nodes[s])
        for t_s, s in targets
    )


def _frontier(
    g: LabeledGraph,
    path: tuple[int, ...],
    stamps: dict[int, int],
) -> tuple:
    """Trim the path to its deepest node that still has undiscovered neighbors."""
    while path and all(w in stamps for w in g.adjacency[path[-1]]):
        path = path[:-1]
    return path


def _discover(
    g: LabeledGraph,
    state: _Traversal,
    node: int,
    new: int,
) -> _Traversal:
    stamps = {**state.stamps, new: len(state.order)}
    path = state.path[: state.path.index(node) + 1] + (new,)
    return _Traversal(stamps, state.order + (new,), path, _closing_tuples(g, stamps, new, node))


def _extensions(g: LabeledGraph, state: _Traversal) -> Iterator[tuple[EdgeTuple, _Traversal]]:
    """Every next tuple a genuine DFS can emit from this state, with the resulting state."""
    if state.pending:
        head, *rest = state.pending
        yield head, _Traversal(state.stamps, state.order, state.path, tuple(rest))
        return
    path = _frontier(g, state.path, state.stamps)
    if not path:
        return
    node = path[-1]
    state = _Traversal(state.stamps, state.order, path, ())
    t_node = state.stamps[node]
    for new, label in g.adjacency[node].items():
        if new not in state.stamps:
            t = EdgeTuple(t_node, len(state.order), g.nodes[node], label, g.nodes[new])
            yield t, _discover(g, state, node, new)


def min_dfs_code(g: LabeledGraph, label_order: LabelOrder = LabelOrder.ID) -> DfsCode:
    """The minimum DFS code of `g` over all DFS traversals."""
    ranks = label_ranks(g, label_order)
    states = [_Traversal({r: 0}, (r,), (r,), ()) for r in range(g.num_nodes)]
    code: list[EdgeTuple] = []
    for _ in range(g.num_edges):
        best: EdgeTuple | None = None
        survivors: dict[tuple, _Traversal] = {}
        for state in states:
            for t, nxt in _extensions(g, state):
                order = CodeOrder.LESS if best is None else compare_tuples(t, best, ranks)
                if order is CodeOrder.LESS:
                    best = t
                    survivors = {}
                if order is not CodeOrder.GREATER:
                    survivors.setdefault((nxt.order, len(nxt.pending)), nxt)
        assert best is not None, "connected graph ran out of DFS extensions"
        code.append(best)
        states = list(survivors.values())
    return DfsCode(tuple(code))


def _all_codes(
    g: LabeledGraph,
    stamps: dict[int, int],
    path: list[int],
    code: list[EdgeTuple],
) -> Iterator[tuple[EdgeTuple, ...]]:
    while path and all(w in stamps for w in g.adjacency[path[-1]]):
        path = path[:-1]
    if not path:
        yield tuple(code)
        return
    node = path[-1]
    for new in sorted(g.adjacency[node]):
        if new in stamps:
            continue
        grown = {**stamps, new: len(stamps)}
        forward = EdgeTuple(stamps[node], grown[new], g.nodes[node], g.adjacency[node][new],
                            g.nodes[new])
        closing = _closing_tuples(g, grown, new, node)
        yield from _all_codes(g, grown, path + [new], code + [forward, *closing])


def enumerate_dfs_codes(g: LabeledGraph) -> Iterator[DfsCode]:
    """Every DFS code of `g`: all start nodes times all neighbor orderings."""
    if g.num_nodes > BRUTE_FORCE_MAX_NODES:
        raise InvalidCodeError(
            f"Graph with {g.num_nodes} nodes exceeds the brute-force limit of "
            f"{BRUTE_FORCE_MAX_NODES}"
        )
    for root in range(g.num_nodes):
        for tuples in _all_codes(g, {root: 0}, [root], []):
            yield DfsCode(tuples)


def brute_force_min_code(g: LabeledGraph, label_order: LabelOrder = LabelOrder.ID) -> DfsCode:
    """Minimum over the exhaustive enumeration of DFS codes."""
    ranks = label_ranks(g, label_order)
    key = functools.cmp_to_key(lambda a, b: compare_codes(a.tuples, b.tuples, ranks).value)
    return min(enumerate_dfs_codes(g), key=key)
