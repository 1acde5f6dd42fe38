"""Binning and sequence layout for optimization trajectories.

A sequence is ``[regret, length]`` followed, for every evaluation, by the
``d`` action coordinates and then the observed state value. All token values
live in [0, 1].
"""

from dataclasses import dataclass
import logging

import numpy as np

from zeroshotopt.exceptions import InputError

logger = logging.getLogger(__name__)

REGRET, LENGTH, ACTION, STATE = 0, 1, 2, 3
LENGTH_SCALE = 40.0


@dataclass(frozen=True)
class TokenizerConfig:
    bin_count: int = 2000

    def __post_init__(self):
        if self.bin_count < 2:
            raise InputError("bin_count must be at least 2")

    def bin(self, value):
        """Bin index of ``value`` (clamped to [0, 1])."""
        v = np.clip(np.asarray(value, dtype=np.float64), 0.0, 1.0)
        K = float(self.bin_count)
        p = v * K
        idx = np.floor(p)
        # p may round up onto an integer; recover the sign of the rounding
        # error exactly (Dekker split) so values just below an edge stay below
        c = 134217729.0 * v
        hi = c - (c - v)
        err = (hi * K - p) + (v - hi) * K
        idx = idx - ((idx == p) & (err < 0))
        idx = np.minimum(idx.astype(np.int64), self.bin_count - 1)
        return int(idx) if idx.ndim == 0 else idx

    def unbin(self, index):
        idx = np.asarray(index)
        if np.any(idx < 0) or np.any(idx >= self.bin_count):
            raise InputError(f"bin index out of range [0, {self.bin_count})")
        out = (idx + 0.5) / self.bin_count
        return float(out) if np.ndim(out) == 0 else out

    def centers(self):
        return (np.arange(self.bin_count) + 0.5) / self.bin_count


@dataclass(frozen=True, eq=False)
class TokenSequence:
    values: np.ndarray
    kinds: np.ndarray
    dims: np.ndarray  # action coordinate index; -1 for non-action tokens
    steps: np.ndarray
    loss_mask: np.ndarray
    clamped: int = 0

    def __len__(self):
        return self.values.shape[0]


def sequence_length(n_evals, d):
    return 2 + n_evals * (d + 1)


def encode_tokens(regret, length_value, points, states, m, initial_action_loss=False):
    """Lay out tokens for ``points`` (n, d) with already-scaled ``states`` (n,)."""
    points = np.asarray(points, dtype=np.float64)
    states = np.asarray(states, dtype=np.float64)
    n, d = points.shape
    if states.shape != (n,):
        raise InputError(f"expected {n} states, got shape {states.shape}")
    clamped = int(np.sum((states < 0) | (states > 1)))
    if clamped:
        logger.debug("clamped %d state values into [0, 1]", clamped)
    states = np.clip(states, 0.0, 1.0)
    block = np.empty((n, d + 1))
    block[:, :d] = np.clip(points, 0.0, 1.0)
    block[:, d] = states
    kinds_block = np.tile(np.append(np.full(d, ACTION), STATE), (n, 1))
    dims_block = np.tile(np.append(np.arange(d), -1), (n, 1))
    steps_block = np.repeat(np.arange(n)[:, None], d + 1, axis=1)
    mask_block = np.ones((n, d + 1), dtype=bool)
    if not initial_action_loss:
        mask_block[:m, :d] = False
    values = np.concatenate([[regret, length_value], block.ravel()])
    kinds = np.concatenate([[REGRET, LENGTH], kinds_block.ravel()])
    dims = np.concatenate([[-1, -1], dims_block.ravel()])
    steps = np.concatenate([[0, 0], steps_block.ravel()])
    mask = np.concatenate([[False, False], mask_block.ravel()])
    return TokenSequence(values.astype(np.float64), kinds.astype(np.int64), dims.astype(np.int64),
                         steps.astype(np.int64), mask, clamped)


def encode_record(record, initial_action_loss=False):
    """Token sequence for a training record, states scaled by its group bounds."""
    return encode_tokens(record.regret, record.length / LENGTH_SCALE, record.points,
                         record.scaled_values(), record.m, initial_action_loss)
