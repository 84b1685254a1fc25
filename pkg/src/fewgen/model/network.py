"""
The recurrent sequence model in numpy: embedding, stacked LSTM cells, five MLP heads.

Batches of teacher-forced sequences are evaluated in one padded pass over time; the backward
pass is exact backpropagation through time. Gate order inside each LSTM weight matrix is
input, forget, output, candidate; the cell input is the concatenation [x, h].
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from ..errors import NumericalError
from ..graphs.alias import FloatArray, IntArray
from .params import ModelParams
from .vocabulary import COMPONENTS, Vocabulary, one_hot_rows

# probabilities are clipped below 1 inside log(1 - p)
_P_MAX = 1.0 - 1e-16


def sigmoid(x: FloatArray) -> FloatArray:
    """Logistic function written with tanh, which never overflows."""
    return 0.5 * (np.tanh(0.5 * x) + 1.0)


def softmax(z: FloatArray) -> FloatArray:
    """Softmax over the last axis."""
    shifted = z - z.max(axis=-1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=-1, keepdims=True)


@dataclass
class HiddenState:
    """Hidden and cell vectors of every recurrent layer."""

    h: list[FloatArray]
    c: list[FloatArray]

    @classmethod
    def zeros(cls, params: ModelParams, batch: int | None = None) -> "HiddenState":
        """The all-zeros initial state h_0."""
        width = params.config.hidden_dim
        shape = (width,) if batch is None else (batch, width)
        layers = range(params.config.num_layers)
        return cls([np.zeros(shape) for _ in layers], [np.zeros(shape) for _ in layers])


class _CellCache(NamedTuple):
    xh: FloatArray
    i: FloatArray
    f: FloatArray
    o: FloatArray
    g: FloatArray
    c_prev: FloatArray
    tanh_c: FloatArray


def _cell(
    W: FloatArray,
    b: FloatArray,
    x: FloatArray,
    h: FloatArray,
    c: FloatArray,
) -> tuple[FloatArray, FloatArray, _CellCache]:
    xh = np.concatenate([x, h], axis=-1)
    z = xh @ W + b
    n = h.shape[-1]
    i = sigmoid(z[..., :n])
    f = sigmoid(z[..., n:2 * n])
    o = sigmoid(z[..., 2 * n:3 * n])
    g = np.tanh(z[..., 3 * n:])
    c_new = f * c + i * g
    tanh_c = np.tanh(c_new)
    return o * tanh_c, c_new, _CellCache(xh, i, f, o, g, c, tanh_c)


def _dropout_mask(
    rng: np.random.Generator | None,
    rate: float,
    shape: tuple[int, ...],
) -> FloatArray | None:
    if rng is None or rate <= 0.0:
        return None
    return (rng.random(shape) >= rate) / (1.0 - rate)


def forward_step(
    params: ModelParams,
    state: HiddenState,
    x: FloatArray,
    train: bool = False,
    dropout: float = 0.0,
    rng: np.random.Generator | None = None,
) -> tuple[HiddenState, tuple[FloatArray, ...]]:
    """
    One recurrent step: token vector(s) in, new state and the five head logit vectors out.

    `x` has shape (V,) or (B, V). Dropout applies only when `train` is set.
    """
    x = np.asarray(x, dtype=np.float64)
    if x.shape[-1] != params.vocab.total_size:
        raise ValueError(
            f"Token vector of width {x.shape[-1]}, model expects {params.vocab.total_size}"
        )
    rate = dropout if train else 0.0
    layer_in = x @ params["embed.W"] + params["embed.b"]
    mask = _dropout_mask(rng, rate, layer_in.shape)
    if mask is not None:
        layer_in = layer_in * mask
    new_h: list[FloatArray] = []
    new_c: list[FloatArray] = []
    for layer in range(params.config.num_layers):
        h, c, _ = _cell(
            params[f"lstm{layer}.W"],
            params[f"lstm{layer}.b"],
            layer_in,
            state.h[layer],
            state.c[layer],
        )
        new_h.append(h)
        new_c.append(c)
        layer_in = h
    mask = _dropout_mask(rng, rate, layer_in.shape)
    if mask is not None:
        layer_in = layer_in * mask
    logits = []
    for name in COMPONENTS:
        r = np.maximum(layer_in @ params[f"{name}.W1"] + params[f"{name}.b1"], 0.0)
        logits.append(r @ params[f"{name}.W2"] + params[f"{name}.b2"])
    return HiddenState(new_h, new_c), tuple(logits)


class BatchEvaluation(NamedTuple):
    """Per-sequence losses and, when requested, the gradient of their weighted sum."""

    losses: FloatArray
    grad: ModelParams | None


def _layer_backward(
    W: FloatArray,
    caches: list[_CellCache],
    d_out: FloatArray,
    width_in: int,
    dW: FloatArray,
    db: FloatArray,
) -> FloatArray:
    """BPTT through one layer; accumulates into dW, db and returns d(layer input)."""
    steps, batch, hidden = d_out.shape
    d_in = np.zeros((steps, batch, width_in))
    dh_next = np.zeros((batch, hidden))
    dc_next = np.zeros((batch, hidden))
    for t in range(steps - 1, -1, -1):
        cache = caches[t]
        dh = d_out[t] + dh_next
        dc = dh * cache.o * (1.0 - cache.tanh_c ** 2) + dc_next
        dz = np.concatenate(
            [
                dc * cache.g * cache.i * (1.0 - cache.i),
                dc * cache.c_prev * cache.f * (1.0 - cache.f),
                dh * cache.tanh_c * cache.o * (1.0 - cache.o),
                dc * cache.i * (1.0 - cache.g ** 2),
            ],
            axis=-1,
        )
        dW += cache.xh.T @ dz
        db += dz.sum(axis=0)
        dxh = dz @ W.T
        d_in[t] = dxh[:, :width_in]
        dh_next = dxh[:, width_in:]
        dc_next = dc * cache.f
    return d_in


def evaluate_batch(
    params: ModelParams,
    targets: Sequence[IntArray],
    weights: FloatArray | None = None,
    need_grad: bool = False,
    dropout: float = 0.0,
    rng: np.random.Generator | None = None,
) -> BatchEvaluation:
    """
    Teacher-forced pass over a batch of encoded codes.

    `targets[b]` holds the (m_b + 1, 5) block-local target indices of sequence b (see
    `Vocabulary.code_indices`). Inputs are SOS followed by the targets shifted by one step.
    The returned gradient is that of sum_b weights[b] * loss_b. Dropout masks are drawn from
    `rng` when `dropout > 0`.
    """
    vocab: Vocabulary = params.vocab
    cfg = params.config
    batch = len(targets)
    steps = max(len(t) for t in targets)
    index = np.empty((steps, batch, len(COMPONENTS)), dtype=np.int64)
    index[:] = np.asarray(vocab.eos)
    mask = np.zeros((steps, batch))
    for b, rows in enumerate(targets):
        index[: len(rows), b] = rows
        mask[: len(rows), b] = 1.0
    inputs = np.zeros((steps, batch, vocab.total_size))
    inputs[1:] = one_hot_rows(index[:-1], vocab)

    embedded = inputs @ params["embed.W"] + params["embed.b"]
    embed_mask = _dropout_mask(rng, dropout, embedded.shape)
    layer_in = embedded if embed_mask is None else embedded * embed_mask

    all_caches: list[list[_CellCache]] = []
    for layer in range(cfg.num_layers):
        W = params[f"lstm{layer}.W"]
        b = params[f"lstm{layer}.b"]
        h = np.zeros((batch, cfg.hidden_dim))
        c = np.zeros((batch, cfg.hidden_dim))
        outputs = np.empty((steps, batch, cfg.hidden_dim))
        caches: list[_CellCache] = []
        for t in range(steps):
            h, c, cache = _cell(W, b, layer_in[t], h, c)
            outputs[t] = h
            caches.append(cache)
        all_caches.append(caches)
        layer_in = outputs
    hidden_mask = _dropout_mask(rng, dropout, layer_in.shape)
    top = layer_in if hidden_mask is None else layer_in * hidden_mask

    losses_tb = np.zeros((steps, batch))
    head_caches = []
    for k, name in enumerate(COMPONENTS):
        a = top @ params[f"{name}.W1"] + params[f"{name}.b1"]
        r = np.maximum(a, 0.0)
        z = r @ params[f"{name}.W2"] + params[f"{name}.b2"]
        shifted = z - z.max(axis=-1, keepdims=True)
        log_p = shifted - np.log(np.exp(shifted).sum(axis=-1, keepdims=True))
        p = np.exp(log_p)
        hot = np.zeros(p.shape, dtype=bool)
        np.put_along_axis(hot, index[..., k:k + 1], True, axis=-1)
        clipped = np.minimum(p, _P_MAX)
        miss = np.where(hot, 0.0, np.log1p(-clipped)).sum(axis=-1)
        hit = np.take_along_axis(log_p, index[..., k:k + 1], axis=-1)[..., 0]
        losses_tb -= hit + miss
        head_caches.append((a, r, p, hot, clipped))
    losses = (losses_tb * mask).sum(axis=0)
    if not np.isfinite(losses).all():
        raise NumericalError("Non-finite sequence loss")
    if not need_grad:
        return BatchEvaluation(losses, None)

    w = np.ones(batch) if weights is None else np.asarray(weights, dtype=np.float64)
    scale = (mask * w)[..., None]
    grad = params.zeros_like()
    d_top = np.zeros_like(top)
    for name, (a, r, p, hot, clipped) in zip(COMPONENTS, head_caches):
        q = np.where(hot, -1.0, p / (1.0 - clipped))
        dz = (q - p * q.sum(axis=-1, keepdims=True)) * scale
        grad.tensors[f"{name}.W2"] += np.einsum("tbf,tbn->fn", r, dz)
        grad.tensors[f"{name}.b2"] += dz.sum(axis=(0, 1))
        da = (dz @ params[f"{name}.W2"].T) * (a > 0.0)
        grad.tensors[f"{name}.W1"] += np.einsum("tbh,tbf->hf", top, da)
        grad.tensors[f"{name}.b1"] += da.sum(axis=(0, 1))
        d_top += da @ params[f"{name}.W1"].T
    d_layer = d_top if hidden_mask is None else d_top * hidden_mask
    for layer in range(cfg.num_layers - 1, -1, -1):
        width_in = cfg.embed_dim if layer == 0 else cfg.hidden_dim
        d_layer = _layer_backward(
            params[f"lstm{layer}.W"],
            all_caches[layer],
            d_layer,
            width_in,
            grad.tensors[f"lstm{layer}.W"],
            grad.tensors[f"lstm{layer}.b"],
        )
    d_embed = d_layer if embed_mask is None else d_layer * embed_mask
    grad.tensors["embed.W"] += np.einsum("tbv,tbd->vd", inputs, d_embed)
    grad.tensors["embed.b"] += d_embed.sum(axis=(0, 1))
    return BatchEvaluation(losses, grad.ensure_finite("gradient"))
