"""Top-level fewgen package exports and convenience imports."""

from .canon.code import DfsCode
from .canon.codefile import read_code_dump, write_code_dump
from .canon.corpus import CodeCorpus, canonize_dataset
from .canon.decode import code_to_graph
from .canon.min_code import brute_force_min_code, min_dfs_code
from .canon.repair import RepairMode, repair_code
from .canon.tuples import EdgeTuple, LabelOrder, compare_codes, compare_tuples
from .errors import (
    DATA_ERRORS,
    ConfigError,
    FewgenError,
    GraphFormatError,
    InvalidCodeError,
    InvalidGraphError,
    NumericalError,
    UsageError,
    VocabularyError,
)
from .finetune.selfpaced import SelfPacedConfig, fine_tune, select_samples, vanilla_fine_tune
from .graphs.dataset import GraphDataset, parse_dataset, read_dataset, save_dataset
from .graphs.dataset import write_dataset
from .graphs.fields import GraphField
from .graphs.graph import LabeledGraph, make_graph, permute_graph
from .graphs.isomorphism import is_isomorphic, is_subgraph
from .graphs.labels import LabelVocabulary
from .graphs.split import SplitSpec, split_dataset
from .graphs.spring import synth_spring
from .meta.reptile import MetaConfig, inner_loop, meta_train, reptile_update
from .metrics.report import EvalConfig, MetricReport, evaluate
from .model.checkpoint import Checkpoint, load_checkpoint, save_checkpoint
from .model.config import TrainConfig
from .model.loss import sequence_grad, sequence_loss
from .model.params import ModelConfig, ModelParams
from .model.vocabulary import Vocabulary, build_vocabulary
from .pipeline import FewShotPipeline, Mode, compare_modes, improvement_pct, sample_aux_subsets
from .sampling.config import GENERATION_PRESETS, GenerationConfig
from .sampling.generate import GenerationReport, generate_graphs, sample_sequence

__version__ = "0.1.0"

__all__ = [
    "Checkpoint",
    "CodeCorpus",
    "ConfigError",
    "DATA_ERRORS",
    "DfsCode",
    "EdgeTuple",
    "EvalConfig",
    "FewShotPipeline",
    "FewgenError",
    "GENERATION_PRESETS",
    "GenerationConfig",
    "GenerationReport",
    "GraphDataset",
    "GraphField",
    "GraphFormatError",
    "InvalidCodeError",
    "InvalidGraphError",
    "LabelOrder",
    "LabelVocabulary",
    "LabeledGraph",
    "MetaConfig",
    "MetricReport",
    "Mode",
    "ModelConfig",
    "ModelParams",
    "NumericalError",
    "RepairMode",
    "SelfPacedConfig",
    "SplitSpec",
    "TrainConfig",
    "UsageError",
    "Vocabulary",
    "VocabularyError",
    "brute_force_min_code",
    "build_vocabulary",
    "canonize_dataset",
    "code_to_graph",
    "compare_codes",
    "compare_modes",
    "compare_tuples",
    "evaluate",
    "fine_tune",
    "generate_graphs",
    "improvement_pct",
    "inner_loop",
    "is_isomorphic",
    "is_subgraph",
    "load_checkpoint",
    "make_graph",
    "meta_train",
    "min_dfs_code",
    "parse_dataset",
    "permute_graph",
    "read_code_dump",
    "read_dataset",
    "repair_code",
    "reptile_update",
    "sample_aux_subsets",
    "sample_sequence",
    "save_checkpoint",
    "save_dataset",
    "select_samples",
    "sequence_grad",
    "sequence_loss",
    "split_dataset",
    "synth_spring",
    "vanilla_fine_tune",
    "write_code_dump",
    "write_dataset",
]
