"""DFS codes: tuple order, canonization, decoding and repair."""

from .code import CodeRule, DfsCode, first_violation
from .corpus import CodeCorpus, canonize_dataset
from .codefile import read_code_dump, write_code_dump
from .decode import code_to_graph
from .min_code import brute_force_min_code, enumerate_dfs_codes, min_dfs_code
from .repair import RepairMode, RepairResult, RepairRule, repair_code
from .tuples import CodeOrder, EdgeTuple, LabelOrder, compare_codes, compare_tuples

__all__ = [
    "CodeCorpus",
    "CodeOrder",
    "CodeRule",
    "DfsCode",
    "EdgeTuple",
    "LabelOrder",
    "RepairMode",
    "RepairResult",
    "RepairRule",
    "brute_force_min_code",
    "canonize_dataset",
    "code_to_graph",
    "compare_codes",
    "compare_tuples",
    "enumerate_dfs_codes",
    "first_violation",
    "min_dfs_code",
    "read_code_dump",
    "repair_code",
    "write_code_dump",
]
