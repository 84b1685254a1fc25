"""
Checkpoint files.

Layout: a magic line `FEWGEN-CHECKPOINT <version>`, one line of JSON header (model
dimensions, vocabulary, seed, step count, free-form metadata, tensor table), then the tensors
as row-major little-endian float64 in table order.
"""

from __future__ import annotations

import json
import pathlib
from dataclasses import asdict, dataclass, field
from typing import Any

import numpy as np

from ..errors import GraphFormatError
from ..graphs.alias import StrOrPath
from ..graphs.labels import LabelVocabulary
from .params import ModelConfig, ModelParams, tensor_shapes
from .vocabulary import Vocabulary

MAGIC = "FEWGEN-CHECKPOINT"
FORMAT_VERSION = 1
_DTYPE = np.dtype("<f8")


@dataclass
class Checkpoint:
    """Parameters plus the bookkeeping needed to resume or generate."""

    params: ModelParams
    seed: int = 0
    step: int = 0
    metadata: dict[str, Any] = field(default_factory=dict)


def save_checkpoint(checkpoint: Checkpoint, path: StrOrPath) -> pathlib.Path:
    """Write a checkpoint; loading it back is bit-exact."""
    path = pathlib.Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    params = checkpoint.params
    vocab = params.vocab
    table = []
    offset = 0
    for name, tensor in params.tensors.items():
        table.append({"name": name, "shape": list(tensor.shape), "offset": offset})
        offset += tensor.size * _DTYPE.itemsize
    header = {
        "version": FORMAT_VERSION,
        "model": asdict(params.config),
        "vocabulary": {
            "max_timestamp": vocab.max_timestamp,
            "node_labels": list(vocab.node_labels.texts),
            "edge_labels": list(vocab.edge_labels.texts),
        },
        "seed": checkpoint.seed,
        "step": checkpoint.step,
        "metadata": checkpoint.metadata,
        "tensors": table,
    }
    with path.open("wb") as handle:
        handle.write(f"{MAGIC} {FORMAT_VERSION}\n".encode("ascii"))
        handle.write(json.dumps(header, sort_keys=True).encode("utf-8") + b"\n")
        for tensor in params.tensors.values():
            handle.write(np.ascontiguousarray(tensor, dtype=_DTYPE).tobytes())
    return path


def load_checkpoint(path: StrOrPath) -> Checkpoint:
    """Read a checkpoint written by `save_checkpoint`."""
    data = pathlib.Path(path).read_bytes()
    magic_end = data.find(b"\n")
    header_end = data.find(b"\n", magic_end + 1)
    if magic_end < 0 or header_end < 0:
        raise GraphFormatError(f"{path}: truncated checkpoint header")
    magic = data[:magic_end].decode("ascii", errors="replace").split()
    if len(magic) != 2 or magic[0] != MAGIC or magic[1] != str(FORMAT_VERSION):
        raise GraphFormatError(f"{path}: not a version {FORMAT_VERSION} checkpoint")
    try:
        header = json.loads(data[magic_end + 1:header_end])
    except json.JSONDecodeError as exc:
        raise GraphFormatError(f"{path}: corrupt checkpoint header") from exc
    config = ModelConfig(**header["model"])
    voc = header["vocabulary"]
    vocab = Vocabulary(
        voc["max_timestamp"],
        LabelVocabulary(tuple(voc["node_labels"])),
        LabelVocabulary(tuple(voc["edge_labels"])),
    )
    expected = tensor_shapes(config, vocab)
    body = data[header_end + 1:]
    tensors = {}
    for entry in header["tensors"]:
        shape = tuple(entry["shape"])
        if expected.get(entry["name"]) != shape:
            raise GraphFormatError(f"{path}: tensor {entry['name']} has unexpected shape")
        count = int(np.prod(shape))
        start = entry["offset"]
        chunk = body[start:start + count * _DTYPE.itemsize]
        if len(chunk) != count * _DTYPE.itemsize:
            raise GraphFormatError(f"{path}: truncated tensor {entry['name']}")
        tensors[entry["name"]] = np.frombuffer(chunk, dtype=_DTYPE).reshape(shape).astype(
            np.float64
        )
    if tensors.keys() != expected.keys():
        raise GraphFormatError(f"{path}: checkpoint tensor set does not match the model")
    params = ModelParams(config, vocab, {name: tensors[name] for name in expected})
    return Checkpoint(params, header["seed"], header["step"], header.get("metadata", {}))
