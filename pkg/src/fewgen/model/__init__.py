"""The autoregressive sequence model over DFS codes."""

from .checkpoint import Checkpoint, load_checkpoint, save_checkpoint
from .config import TrainConfig
from .loss import batch_gradient, batch_losses, mean_loss, sequence_grad, sequence_loss
from .network import HiddenState, evaluate_batch, forward_step, softmax
from .optim import AdamState, adam_step
from .params import ModelConfig, ModelParams
from .train import EarlyStopping, EpochRecord, TrainResult, iterate_batches, train_epochs
from .vocabulary import Vocabulary, build_vocabulary, decode_tuple, encode_tuple

__all__ = [
    "AdamState",
    "Checkpoint",
    "EarlyStopping",
    "EpochRecord",
    "HiddenState",
    "ModelConfig",
    "ModelParams",
    "TrainConfig",
    "TrainResult",
    "Vocabulary",
    "adam_step",
    "batch_gradient",
    "batch_losses",
    "build_vocabulary",
    "decode_tuple",
    "encode_tuple",
    "evaluate_batch",
    "forward_step",
    "iterate_batches",
    "load_checkpoint",
    "mean_loss",
    "save_checkpoint",
    "sequence_grad",
    "sequence_loss",
    "softmax",
    "train_epochs",
]
