"""
Run configuration as a flat mapping of dotted keys.

Keys are `<section>.<field>` for the fields of the library configuration dataclasses, plus
the top-level `seed` and `threads`. The seed fields of the sections are not keys of their own:
every phase of a run uses the top-level seed.
"""

from __future__ import annotations

import json
import pathlib
from dataclasses import MISSING, dataclass, field, fields
from enum import Enum
from fractions import Fraction
from typing import Any, Mapping

from ..canon.repair import RepairMode
from ..errors import ConfigError
from ..finetune.selfpaced import SelfPacedConfig
from ..graphs.alias import StrOrPath
from ..graphs.split import SplitSpec
from ..meta.reptile import MetaConfig
from ..metrics.report import EvalConfig
from ..model.config import TrainConfig
from ..model.params import ModelConfig
from ..sampling.config import GenerationConfig

SECTIONS: dict[str, type] = {
    "model": ModelConfig,
    "train": TrainConfig,
    "meta": MetaConfig,
    "selfpaced": SelfPacedConfig,
    "generate": GenerationConfig,
    "split": SplitSpec,
    "eval": EvalConfig,
}

# seeds come from the top-level key; fine-tuning reads the train section
_SKIPPED_FIELDS = {"seed", "selfpaced.train"}


def _default_of(f) -> Any:
    if f.default is not MISSING:
        return f.default
    if f.default_factory is not MISSING:
        return f.default_factory()
    raise ConfigError(f"Field {f.name} has no default")


def _jsonable(value: Any) -> Any:
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, Fraction):
        return str(value)
    return value


def default_values() -> dict[str, Any]:
    """Every known key with its default value."""
    values: dict[str, Any] = {"seed": 0, "threads": None}
    for section, cls in SECTIONS.items():
        for f in fields(cls):
            if f.name in _SKIPPED_FIELDS or f"{section}.{f.name}" in _SKIPPED_FIELDS:
                continue
            values[f"{section}.{f.name}"] = _jsonable(_default_of(f))
    return values


@dataclass
class RunConfig:
    """A fully resolved run configuration."""

    values: dict[str, Any] = field(default_factory=default_values)

    @classmethod
    def load(cls, path: StrOrPath) -> "RunConfig":
        """Defaults overridden by a JSON file of dotted keys."""
        path = pathlib.Path(path)
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: invalid JSON: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError(f"{path}: expected a JSON object of dotted keys")
        return cls().update(data)

    def update(self, overrides: Mapping[str, Any]) -> "RunConfig":
        """Apply overrides in place; None values are ignored, unknown keys are errors."""
        for key, value in overrides.items():
            if key not in self.values:
                raise ConfigError(f"Unknown config key: {key!r}")
            if value is not None:
                self.values[key] = _jsonable(value)
        return self

    def __getitem__(self, key: str) -> Any:
        return self.values[key]

    @property
    def seed(self) -> int:
        """The seed of every phase."""
        return int(self.values["seed"])

    def section(self, name: str) -> dict[str, Any]:
        """Field values of one section."""
        prefix = name + "."
        return {k[len(prefix):]: v for k, v in self.values.items() if k.startswith(prefix)}

    def _build(self, name: str, **extra: Any) -> Any:
        try:
            return SECTIONS[name](**self.section(name), **extra)
        except TypeError as exc:
            raise ConfigError(f"Invalid {name} configuration: {exc}") from exc

    def model(self) -> ModelConfig:
        """Model dimensions."""
        return self._build("model")

    def train(self) -> TrainConfig:
        """Optimizer and stopping settings."""
        return self._build("train", seed=self.seed)

    def meta(self) -> MetaConfig:
        """Meta-training settings."""
        return self._build("meta", seed=self.seed)

    def selfpaced(self) -> SelfPacedConfig:
        """Pace schedule with the run's training settings."""
        return self._build("selfpaced", train=self.train())

    def generation(self) -> GenerationConfig:
        """Generation settings; the repair mode is given by name."""
        section = self.section("generate")
        try:
            section["repair"] = RepairMode(section["repair"])
            return GenerationConfig(**section, seed=self.seed)
        except (TypeError, ValueError) as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"Invalid generate configuration: {exc}") from exc

    def split(self) -> SplitSpec:
        """Target split fractions."""
        return self._build("split", seed=self.seed)

    def evaluation(self) -> EvalConfig:
        """Metric settings."""
        return self._build("eval")

    def validate(self) -> "RunConfig":
        """Build every section once so invalid values fail before any work starts."""
        self.model()
        self.meta()
        self.selfpaced()
        self.generation()
        self.split()
        self.evaluation()
        return self

    def to_json(self) -> str:
        """The resolved mapping with sorted keys."""
        return json.dumps(self.values, indent=2, sort_keys=True) + "\n"

