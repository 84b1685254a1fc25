"""Helpers for dataset path arguments."""

from __future__ import annotations

import pathlib
from collections.abc import Iterable
from typing import Generator

from ..errors import ConfigError
from ..graphs.alias import StrPathOrListOfStrPath
from ..graphs.dataset import GraphDataset, read_dataset


def normalize_path(
    paths: StrPathOrListOfStrPath,
) -> Generator[pathlib.Path, None, None]:
    """
    Normalize input into a generator of pathlib.Path objects.
    Accepts a str, pathlib.Path, or a (possibly nested) list/tuple of those.
    Recursively flattens lists/tuples. Raises ConfigError for unsupported types.
    """
    match paths:
        case str():
            yield pathlib.Path(paths)
        case pathlib.Path():
            yield paths
        case list() | tuple():
            for item in paths:
                yield from normalize_path(item)
        case Iterable():
            for item in paths:
                yield from normalize_path(item)
        case _:
            raise ConfigError(f"Invalid paths argument: {paths!r}")


def existing_files(paths: StrPathOrListOfStrPath) -> list[pathlib.Path]:
    """Flattened paths, each checked to be an existing file."""
    files = list(normalize_path(paths))
    for path in files:
        if not path.is_file():
            raise ConfigError(f"No such dataset file: {path}")
    return files


def load_datasets(
    paths: StrPathOrListOfStrPath,
    unlabeled_edges: bool = False,
) -> list[GraphDataset]:
    """Read every dataset file, named by file stem."""
    return [read_dataset(path, unlabeled_edges) for path in existing_files(paths)]
