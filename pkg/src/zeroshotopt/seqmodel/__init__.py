"""Tokenization, transformer, checkpoints and training for trajectory sequences."""

from zeroshotopt.seqmodel.checkpoint import Checkpoint, load_checkpoint, save_checkpoint
from zeroshotopt.seqmodel.model import ModelConfig, TrajectoryTransformer
from zeroshotopt.seqmodel.tokenizer import TokenizerConfig, encode_record, encode_tokens
from zeroshotopt.seqmodel.training import TrainConfig, model_from_checkpoint, train

__all__ = [
    "Checkpoint",
    "ModelConfig",
    "TokenizerConfig",
    "TrainConfig",
    "TrajectoryTransformer",
    "encode_record",
    "encode_tokens",
    "load_checkpoint",
    "model_from_checkpoint",
    "save_checkpoint",
    "train",
]
