"""
End-to-end few-shot experiments: initialization, fine-tuning, generation and evaluation.

Supports both classic constructor configuration and fluent/builder-style chained setup:
    FewShotPipeline(auxiliary=aux, target=target, mode=Mode.META)
    FewShotPipeline().with_auxiliary(*aux).with_target(target).mode(Mode.META)
"""

from __future__ import annotations

import logging
import math
import statistics
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Sequence

import numpy as np

from .canon.corpus import CodeCorpus, canonize_dataset
from .errors import ConfigError
from .finetune.selfpaced import FineTuneResult, SelfPacedConfig, fine_tune, vanilla_fine_tune
from .graphs.dataset import GraphDataset
from .graphs.split import SplitSpec, split_dataset
from .meta.reptile import MetaConfig, MetaResult, meta_train
from .metrics.report import EvalConfig, MetricReport, evaluate
from .model.config import TrainConfig
from .model.params import ModelConfig, ModelParams
from .model.train import TrainResult, train_epochs
from .model.vocabulary import Vocabulary, build_vocabulary
from .sampling.config import GenerationConfig, default_max_tuples
from .sampling.generate import GenerationReport, generate_graphs

logger = logging.getLogger(__name__)


class Mode(Enum):
    """Where fine-tuning starts from."""

    META = "meta"
    PRETRAIN = "pretrain"
    SCRATCH = "scratch"


@dataclass
class PipelineResult:
    """Everything one run produced; `metrics` is None when nothing could be evaluated."""

    mode: Mode
    seed: int
    vanilla: bool
    vocab: Vocabulary
    params: ModelParams
    fine_tuning: FineTuneResult
    generated: GraphDataset
    generation: GenerationReport
    metrics: MetricReport | None
    meta: MetaResult | None = None
    pretraining: TrainResult | None = None

    @property
    def label(self) -> str:
        """Mode name, with a suffix for vanilla fine-tuning."""
        return f"{self.mode.value}-vanilla" if self.vanilla else self.mode.value


def auxiliary_corpora(
    datasets: Sequence[GraphDataset],
    vocab: Vocabulary,
    seed: int,
    workers: int = 1,
) -> tuple[list[CodeCorpus], list[CodeCorpus]]:
    """Meta-train and meta-validation corpora from the seeded halves of each dataset."""
    if not datasets:
        raise ConfigError("At least one auxiliary dataset is required")
    halves = [split_dataset(vocab.adopt(d), SplitSpec.halves(seed)) for d in datasets]
    corpora = [canonize_dataset(h[0], workers) for h in halves]
    validation = [canonize_dataset(h[1], workers) for h in halves if len(h[1])]
    return corpora, validation


def pretrain_pooled(
    init: ModelParams,
    corpora: Sequence[CodeCorpus],
    validation: Sequence[CodeCorpus],
    cfg: TrainConfig,
) -> TrainResult:
    """Plain training on the concatenation of all auxiliary corpora."""
    pooled = [code for c in corpora for code in c.codes]
    pooled_val = [code for c in validation for code in c.codes]
    return train_epochs(init, pooled, cfg, pooled_val or None)


class FewShotPipeline:
    """
    Few-shot generation experiment over auxiliary datasets and one target dataset.

    Auxiliary datasets are split in halves for meta-training and meta-validation. The target
    is split into train, validation and test partitions; the model is fine-tuned on the
    training partition and generated graphs are compared with the test partition.
    """

    def __init__(
        self,
        *,
        auxiliary: Sequence[GraphDataset] = (),
        target: GraphDataset | None = None,
        mode: Mode = Mode.META,
        model: ModelConfig | None = None,
        train: TrainConfig | None = None,
        meta: MetaConfig | None = None,
        selfpaced: SelfPacedConfig | None = None,
        generation: GenerationConfig | None = None,
        evaluation: EvalConfig | None = None,
        split: SplitSpec | None = None,
        vanilla: bool = False,
        train_limit: int | None = None,
        workers: int = 1,
    ) -> None:
        self._auxiliary: tuple[GraphDataset, ...] = tuple(auxiliary)
        self._target: GraphDataset | None = target
        self._mode: Mode = mode
        self._model: ModelConfig = model or ModelConfig()
        self._train: TrainConfig = train or TrainConfig()
        self._meta: MetaConfig = meta or MetaConfig()
        self._selfpaced: SelfPacedConfig = selfpaced or SelfPacedConfig()
        self._generation: GenerationConfig = generation or GenerationConfig()
        self._evaluation: EvalConfig = evaluation or EvalConfig()
        self._split: SplitSpec = split or SplitSpec()
        self._vanilla: bool = vanilla
        self._train_limit: int | None = train_limit
        self._workers: int = workers

    # --- Builder/Fluent API methods ---
    def with_auxiliary(self, *datasets: GraphDataset) -> "FewShotPipeline":
        """Set the auxiliary datasets."""
        self._auxiliary = tuple(datasets)
        return self

    def with_target(self, dataset: GraphDataset) -> "FewShotPipeline":
        """Set the target dataset."""
        self._target = dataset
        return self

    def mode(self, mode: Mode | str) -> "FewShotPipeline":
        """Set the initialization mode."""
        self._mode = Mode(mode)
        return self

    def model_config(self, config: ModelConfig) -> "FewShotPipeline":
        """Set the model dimensions."""
        self._model = config
        return self

    def train_config(self, config: TrainConfig) -> "FewShotPipeline":
        """Set the optimizer and stopping settings used by every training phase."""
        self._train = config
        return self

    def meta_config(self, config: MetaConfig) -> "FewShotPipeline":
        """Set the meta-training settings."""
        self._meta = config
        return self

    def selfpaced_config(self, config: SelfPacedConfig) -> "FewShotPipeline":
        """Set the pace schedule."""
        self._selfpaced = config
        return self

    def generation_config(self, config: GenerationConfig) -> "FewShotPipeline":
        """Set the generation settings."""
        self._generation = config
        return self

    def eval_config(self, config: EvalConfig) -> "FewShotPipeline":
        """Set the metric settings."""
        self._evaluation = config
        return self

    def split_spec(self, spec: SplitSpec) -> "FewShotPipeline":
        """Set the target split fractions."""
        self._split = spec
        return self

    def vanilla(self, value: bool = True) -> "FewShotPipeline":
        """Set whether fine-tuning uses every code instead of the pace schedule."""
        self._vanilla = value
        return self

    def train_limit(self, limit: int | None) -> "FewShotPipeline":
        """Keep only the first `limit` graphs of the target training partition."""
        if limit is not None and limit < 1:
            raise ConfigError(f"train_limit must be >= 1, got {limit}")
        self._train_limit = limit
        return self

    def workers(self, count: int) -> "FewShotPipeline":
        """Set the worker count of parallel sections."""
        self._workers = count
        return self

    # --- Property getters for testing fluent interface ---
    @property
    def get_auxiliary(self) -> tuple[GraphDataset, ...]:
        """For test support: get internal auxiliary datasets."""
        return self._auxiliary

    @property
    def get_target(self) -> GraphDataset | None:
        """For test support: get internal target dataset."""
        return self._target

    @property
    def get_mode(self) -> Mode:
        """For test support: get internal mode."""
        return self._mode

    @property
    def get_vanilla(self) -> bool:
        """For test support: get internal vanilla flag."""
        return self._vanilla

    @property
    def get_train_limit(self) -> int | None:
        """For test support: get internal train_limit value."""
        return self._train_limit

    # --- Pipeline logic ---
    def _initialize(
        self,
        vocab: Vocabulary,
        seed: int,
        train: TrainConfig,
    ) -> tuple[ModelParams, MetaResult | None, TrainResult | None]:
        init = ModelParams.initialize(self._model, vocab, seed)
        if self._mode is Mode.SCRATCH:
            return init, None, None
        corpora, validation = auxiliary_corpora(self._auxiliary, vocab, seed, self._workers)
        if self._mode is Mode.META:
            meta = replace(self._meta, seed=seed)
            result = meta_train(corpora, meta, train, validation, init)
            return result.params, result, None
        pretrained = pretrain_pooled(init, corpora, validation, train)
        return pretrained.params, None, pretrained

    def run(self, seed: int | None = None) -> PipelineResult:
        """Run the experiment once; `seed` overrides the seed of every phase."""
        if self._target is None:
            raise ConfigError("No target dataset")
        train_cfg = self._train if seed is None else replace(self._train, seed=seed)
        seed = train_cfg.seed
        vocab = build_vocabulary([*self._auxiliary, self._target])
        split = replace(self._split, seed=seed)
        train_set, val_set, test_set = split_dataset(vocab.adopt(self._target), split)
        if self._train_limit is not None:
            train_set = train_set.subset(range(min(self._train_limit, len(train_set))))
        if not len(train_set):
            raise ConfigError(f"Target {self._target.name!r} leaves no training graphs")
        params, meta, pretraining = self._initialize(vocab, seed, train_cfg)

        train_codes = canonize_dataset(train_set, self._workers).codes
        val_codes = canonize_dataset(val_set, self._workers).codes or None
        if self._vanilla:
            tuned = vanilla_fine_tune(params, train_codes, train_cfg, val_codes)
        else:
            spc = replace(self._selfpaced, train=train_cfg)
            tuned = fine_tune(params, train_codes, spc, val_codes)

        gc = replace(self._generation, seed=seed)
        if gc.max_tuples is None:
            gc = replace(gc, max_tuples=default_max_tuples(train_set))
        generated, report = generate_graphs(tuned.params, vocab, gc, self._workers)
        metrics = None
        if len(generated) and len(test_set):
            metrics = evaluate(generated, test_set, train_set, self._evaluation, self._workers)
        else:
            logger.warning("Nothing to evaluate for mode %s, seed %d", self._mode.value, seed)
        return PipelineResult(
            self._mode,
            seed,
            self._vanilla,
            vocab,
            tuned.params,
            tuned,
            generated,
            report,
            metrics,
            meta,
            pretraining,
        )


def improvement_pct(p_vanilla: float | None, p: float | None) -> float | None:
    """Relative improvement (p_vanilla - p) / p in percent; None when undefined."""
    if p_vanilla is None or p is None or p == 0:
        return None
    return (p_vanilla - p) / p * 100.0


def summarize(reports: Sequence[MetricReport | None]) -> dict[str, tuple[float, float] | None]:
    """Mean and sample standard deviation of every metric over the available reports."""
    summary: dict[str, tuple[float, float] | None] = {}
    for name in MetricReport.metric_names():
        values = [getattr(r, name) for r in reports if r is not None]
        values = [v for v in values if v is not None]
        if not values:
            summary[name] = None
            continue
        std = statistics.stdev(values) if len(values) > 1 else 0.0
        summary[name] = (statistics.mean(values), std)
    return summary


@dataclass
class Comparison:
    """Runs of several modes over several seeds."""

    runs: list[PipelineResult] = field(default_factory=list)

    def labels(self) -> list[str]:
        """Run labels in first-run order."""
        return list(dict.fromkeys(run.label for run in self.runs))

    def summary(self) -> dict[str, dict[str, tuple[float, float] | None]]:
        """Per label, mean and standard deviation of every metric."""
        return {
            label: summarize([run.metrics for run in self.runs if run.label == label])
            for label in self.labels()
        }

    def to_tsv(self) -> str:
        """Per-run metric table followed by one mean row per label."""
        names = MetricReport.metric_names()
        lines = ["\t".join(["mode", "seed", *names])]
        for run in self.runs:
            values = run.metrics.to_dict() if run.metrics else {}
            cells = [_cell(values.get(name)) for name in names]
            lines.append("\t".join([run.label, str(run.seed), *cells]))
        for label, stats in self.summary().items():
            cells = [_cell(None if stats[n] is None else stats[n][0]) for n in names]
            lines.append("\t".join([label, "mean", *cells]))
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        """Per-run metrics and per-label summaries."""
        return {
            "runs": [
                {
                    "mode": run.label,
                    "seed": run.seed,
                    "metrics": run.metrics.to_dict() if run.metrics else None,
                    "generation": {
                        "emitted": run.generation.emitted,
                        "attempts": run.generation.attempts,
                        "rejected": run.generation.rejected,
                    },
                }
                for run in self.runs
            ],
            "summary": {
                label: {
                    name: None if s is None else {"mean": s[0], "std": s[1]}
                    for name, s in stats.items()
                }
                for label, stats in self.summary().items()
            },
        }

    def ablation_tsv(self, base: str = "meta-vanilla", variant: str = "meta") -> str:
        """Per-metric improvement of the variant over the base, from the mean values."""
        summary = self.summary()
        if base not in summary or variant not in summary:
            raise ConfigError(f"Ablation needs runs labeled {base!r} and {variant!r}")
        lines = ["metric\t" + base + "\t" + variant + "\timprovement_pct"]
        for name in MetricReport.metric_names():
            b = summary[base][name]
            v = summary[variant][name]
            p_base = None if b is None else b[0]
            p_variant = None if v is None else v[0]
            gain = improvement_pct(p_base, p_variant)
            lines.append(f"{name}\t{_cell(p_base)}\t{_cell(p_variant)}\t{_cell(gain)}")
        return "\n".join(lines) + "\n"


def _cell(value: object) -> str:
    if value is None or value == "N/A":
        return "N/A"
    if isinstance(value, float):
        return f"{value:.10g}"
    return str(value)


def compare_modes(
    pipeline: FewShotPipeline,
    modes: Sequence[Mode],
    seeds: Sequence[int],
    ablation: bool = False,
) -> Comparison:
    """
    Run every mode for every seed.

    With `ablation`, meta mode also runs with vanilla fine-tuning. The pipeline's mode and
    vanilla flag are restored afterwards.
    """
    saved = (pipeline.get_mode, pipeline.get_vanilla)
    variants = [(m, False) for m in modes]
    if ablation:
        variants.append((Mode.META, True))
    comparison = Comparison()
    try:
        for seed in seeds:
            for mode, vanilla in variants:
                logger.info("Running mode %s (vanilla=%s) seed %d", mode.value, vanilla, seed)
                comparison.runs.append(pipeline.mode(mode).vanilla(vanilla).run(seed))
    finally:
        pipeline.mode(saved[0]).vanilla(saved[1])
    return comparison


def sample_aux_subsets(
    names: Sequence[str],
    size: int,
    count: int,
    seed: int = 0,
) -> list[tuple[str, ...]]:
    """`count` distinct subsets of `size` names, each in input order."""
    if not 1 <= size <= len(names):
        raise ConfigError(f"Subset size must be in [1, {len(names)}], got {size}")
    if not 1 <= count <= math.comb(len(names), size):
        raise ConfigError(
            f"Cannot draw {count} distinct subsets of size {size} from {len(names)} datasets"
        )
    rng = np.random.default_rng(seed)
    chosen: dict[tuple[int, ...], None] = {}
    while len(chosen) < count:
        picks = tuple(sorted(int(i) for i in rng.choice(len(names), size=size, replace=False)))
        chosen.setdefault(picks, None)
    return [tuple(names[i] for i in picks) for picks in chosen]


def aux_subset_summary(
    comparisons: Sequence[Comparison],
) -> dict[str, dict[str, tuple[float, float] | None]]:
    """Mean and standard deviation over auxiliary subsets of every label's mean metrics."""
    labels = list(dict.fromkeys(label for c in comparisons for label in c.labels()))
    result: dict[str, dict[str, tuple[float, float] | None]] = {}
    for label in labels:
        means: dict[str, list[float]] = {name: [] for name in MetricReport.metric_names()}
        for comparison in comparisons:
            stats = comparison.summary().get(label, {})
            for name, s in stats.items():
                if s is not None:
                    means[name].append(s[0])
        result[label] = {
            name: (
                (statistics.mean(v), statistics.stdev(v) if len(v) > 1 else 0.0) if v else None
            )
            for name, v in means.items()
        }
    return result


__all__ = [
    "Comparison",
    "FewShotPipeline",
    "Mode",
    "PipelineResult",
    "aux_subset_summary",
    "auxiliary_corpora",
    "compare_modes",
    "improvement_pct",
    "pretrain_pooled",
    "sample_aux_subsets",
    "summarize",
]
