"""Graph generation from a trained model."""

from .config import GENERATION_PRESETS, GenerationConfig, default_max_tuples
from .generate import (
    GenerationReport,
    SampledSequence,
    chain_quotas,
    generate_graphs,
    resolve_max_tuples,
    sample_sequence,
)

__all__ = [
    "GENERATION_PRESETS",
    "GenerationConfig",
    "GenerationReport",
    "SampledSequence",
    "chain_quotas",
    "default_max_tuples",
    "generate_graphs",
    "resolve_max_tuples",
    "sample_sequence",
]
