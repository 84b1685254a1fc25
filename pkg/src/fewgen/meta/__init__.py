"""Meta-training over auxiliary datasets."""

from .reptile import (
    InnerResult,
    MetaConfig,
    MetaLogEntry,
    MetaResult,
    inner_loop,
    meta_train,
    reptile_update,
)

__all__ = [
    "InnerResult",
    "MetaConfig",
    "MetaLogEntry",
    "MetaResult",
    "inner_loop",
    "meta_train",
    "reptile_update",
]
