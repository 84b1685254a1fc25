"""Fine-tuning on the few-shot target dataset."""

from .selfpaced import (
    BatchLogEntry,
    FineTuneResult,
    SelfPacedConfig,
    StepResult,
    fine_tune,
    initial_threshold,
    pace_threshold,
    select_samples,
    self_paced_batch_step,
    vanilla_batch_step,
    vanilla_fine_tune,
)

__all__ = [
    "BatchLogEntry",
    "FineTuneResult",
    "SelfPacedConfig",
    "StepResult",
    "fine_tune",
    "initial_threshold",
    "pace_threshold",
    "select_samples",
    "self_paced_batch_step",
    "vanilla_batch_step",
    "vanilla_fine_tune",
]
