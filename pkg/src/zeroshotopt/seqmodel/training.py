"""Training loop for the trajectory transformer."""

from dataclasses import asdict, dataclass, fields
import json
import logging
import math
import os

import numpy as np
import torch

from zeroshotopt.exceptions import InputError, NumericalError
from zeroshotopt.seqmodel.checkpoint import (
    Checkpoint,
    load_model_state,
    model_state_arrays,
    save_checkpoint,
)
from zeroshotopt.seqmodel.model import (
    ModelConfig,
    TrajectoryTransformer,
    collate,
    forward_batch,
    masked_accuracy,
    sequence_loss,
)
from zeroshotopt.seqmodel.tokenizer import TokenizerConfig, encode_record
from zeroshotopt.trajectories import (
    LENGTHS,
    augment_axis_swap,
    augment_flip,
    group_records,
    truncate,
)

logger = logging.getLogger(__name__)


@dataclass
class TrainConfig:
    learning_rate: float = 6e-4
    min_learning_rate: float = 6e-5
    weight_decay: float = 0.1
    beta1: float = 0.9
    beta2: float = 0.95
    batch_size: int = 32
    total_iterations: int = 50_000
    warmup_fraction: float = 0.02
    grad_clip: float = 1.0
    precision: str = "float32"
    augment: bool = True
    truncate: bool = True
    fixed_reference: bool = False
    initial_action_loss: bool = False
    checkpoint_interval: int = 0
    checkpoint_path: str = ""
    log_interval: int = 100
    seed: int = 0

    def __post_init__(self):
        if self.precision not in ("float32", "float64"):
            raise InputError("precision must be float32 or float64")
        if self.batch_size < 1 or self.total_iterations < 1:
            raise InputError("batch_size and total_iterations must be positive")

    @property
    def warmup_iterations(self):
        return int(round(self.warmup_fraction * self.total_iterations))

    def to_dict(self):
        return asdict(self)

    @classmethod
    def from_dict(cls, data):
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise InputError(f"unknown training config keys: {sorted(unknown)}")
        return cls(**data)

    @classmethod
    def from_json(cls, path):
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))


def learning_rate_at(step, config):
    """Linear warmup to the peak rate, then cosine decay to the floor."""
    warmup = config.warmup_iterations
    if warmup > 0 and step < warmup:
        return config.learning_rate * (step + 1) / warmup
    if step >= config.total_iterations:
        return config.min_learning_rate
    span = max(1, config.total_iterations - warmup)
    progress = (step - warmup) / span
    coeff = 0.5 * (1.0 + math.cos(math.pi * progress))
    return config.min_learning_rate + coeff * (config.learning_rate - config.min_learning_rate)


def torch_dtype(precision):
    return torch.float64 if precision == "float64" else torch.float32


def build_optimizer(model, config):
    decay = [p for p in model.parameters() if p.dim() >= 2]
    no_decay = [p for p in model.parameters() if p.dim() < 2]
    groups = [
        {"params": decay, "weight_decay": config.weight_decay},
        {"params": no_decay, "weight_decay": 0.0},
    ]
    return torch.optim.AdamW(groups, lr=config.learning_rate,
                             betas=(config.beta1, config.beta2), foreach=False)


class BatchSampler:
    """Draws augmented, optionally truncated training sequences."""

    def __init__(self, records, tokenizer, config, rng):
        self.records = list(records)
        if not self.records:
            raise InputError("training dataset is empty")
        self.groups = group_records(self.records)
        self.tokenizer = tokenizer
        self.config = config
        self.rng = rng

    def sample_record(self):
        rng = self.rng
        record = self.records[int(rng.integers(len(self.records)))]
        cfg = self.config
        if cfg.truncate:
            options = [L for L in LENGTHS if L <= record.length]
            if options:
                L = options[int(rng.integers(len(options)))]
                if L != record.length:
                    record = truncate(record, L, self.groups[record.function_id],
                                      cfg.fixed_reference)
        if cfg.augment:
            record = augment_axis_swap(record, rng.permutation(record.dimension))
            record = augment_flip(record, rng.random(record.dimension) < 0.5)
        return record

    def batch(self):
        seqs = [encode_record(self.sample_record(), self.config.initial_action_loss)
                for _ in range(self.config.batch_size)]
        return collate(seqs, self.tokenizer)


def _optimizer_arrays(optimizer, model):
    names = {id(p): n for n, p in model.named_parameters()}
    out, steps = {}, {}
    for group in optimizer.param_groups:
        for p in group["params"]:
            state = optimizer.state.get(p)
            if not state:
                continue
            name = names[id(p)]
            out[f"exp_avg.{name}"] = state["exp_avg"].detach().numpy().copy()
            out[f"exp_avg_sq.{name}"] = state["exp_avg_sq"].detach().numpy().copy()
            steps[name] = float(state["step"])
    return out, steps


def _restore_optimizer(optimizer, model, arrays, steps):
    params = dict(model.named_parameters())
    for name, step in steps.items():
        p = params[name]
        optimizer.state[p] = {
            "step": torch.tensor(step, dtype=torch.float32),
            "exp_avg": torch.from_numpy(np.array(arrays[f"exp_avg.{name}"])),
            "exp_avg_sq": torch.from_numpy(np.array(arrays[f"exp_avg_sq.{name}"])),
        }


def _rng_state_json(rng):
    return json.loads(json.dumps(rng.bit_generator.state))


def _make_checkpoint(model, optimizer, model_config, tokenizer, train_config, step, rng,
                     history):
    optim_arrays, optim_steps = _optimizer_arrays(optimizer, model)
    torch_state = torch.get_rng_state().numpy().astype(np.uint8)
    optim_arrays["torch_rng"] = torch_state
    return Checkpoint(
        model_config=model_config.to_dict(),
        tokenizer_config={"bin_count": tokenizer.bin_count},
        train_config=train_config.to_dict(),
        step=step,
        params=model_state_arrays(model),
        shapes={},
        optimizer=optim_arrays,
        extra={"optimizer_steps": optim_steps, "numpy_rng": _rng_state_json(rng),
               "loss_history": history},
    )


def model_from_checkpoint(ckpt, dtype=None):
    config = ModelConfig.from_dict(ckpt.model_config)
    model = TrajectoryTransformer(config)
    if dtype is None:
        dtype = torch_dtype(ckpt.train_config.get("precision", "float32"))
    model.to(dtype)
    load_model_state(model, ckpt.params)
    model.eval()
    return model


def train(records, model_config, train_config, resume_from=None, stop_at=None,
          callback=None):
    """Train (or continue training) a model and return the final checkpoint.

    ``stop_at`` ends the run early at that global step while keeping the
    schedule of ``train_config.total_iterations``; ``resume_from`` continues
    parameters, optimizer moments, RNG state and step counter.
    """
    tokenizer = TokenizerConfig(model_config.bin_count)
    dtype = torch_dtype(train_config.precision)
    if resume_from is not None:
        model = model_from_checkpoint(resume_from, dtype)
        start = resume_from.step
    else:
        torch.manual_seed(train_config.seed)
        model = TrajectoryTransformer(model_config).to(dtype)
        start = 0
    model.train()
    optimizer = build_optimizer(model, train_config)
    rng = np.random.default_rng(train_config.seed)
    history = []
    if resume_from is not None:
        opt = dict(resume_from.optimizer)
        torch_rng = opt.pop("torch_rng", None)
        _restore_optimizer(optimizer, model, opt, resume_from.extra.get("optimizer_steps", {}))
        rng.bit_generator.state = resume_from.extra["numpy_rng"]
        if torch_rng is not None:
            torch.set_rng_state(torch.from_numpy(np.asarray(torch_rng, dtype=np.uint8)))
        history = list(resume_from.extra.get("loss_history", []))
    sampler = BatchSampler(records, tokenizer, train_config, rng)
    end = train_config.total_iterations if stop_at is None else min(stop_at,
                                                                      train_config.total_iterations)
    step = start
    while step < end:
        lr = learning_rate_at(step, train_config)
        for group in optimizer.param_groups:
            group["lr"] = lr
        batch = sampler.batch()
        logits = forward_batch(model, batch)
        loss = sequence_loss(logits, batch["targets"], batch["mask"])
        if not torch.isfinite(loss):
            ckpt = _make_checkpoint(model, optimizer, model_config, tokenizer, train_config,
                                    step, rng, history)
            path = train_config.checkpoint_path or "nan_abort.zsoc"
            save_checkpoint(ckpt, path)
            raise NumericalError(f"non-finite loss at step {step}; last good state in {path}")
        optimizer.zero_grad(set_to_none=True)
        loss.backward()
        if train_config.grad_clip > 0:
            torch.nn.utils.clip_grad_norm_(model.parameters(), train_config.grad_clip,
                                           foreach=False)
        optimizer.step()
        step += 1
        loss_value = loss.item()
        if step % max(1, train_config.log_interval) == 0 or step == end:
            acc = masked_accuracy(logits.detach(), batch["targets"], batch["mask"])
            history.append([step, loss_value, acc, lr])
            logger.info("step %d loss %.4f acc %.3f lr %.2e", step, loss_value, acc, lr)
        if callback is not None:
            callback(step, loss_value)
        if (train_config.checkpoint_interval and train_config.checkpoint_path
                and step % train_config.checkpoint_interval == 0 and step < end):
            save_checkpoint(_make_checkpoint(model, optimizer, model_config, tokenizer,
                                             train_config, step, rng, history),
                            train_config.checkpoint_path)
    model.eval()
    return _make_checkpoint(model, optimizer, model_config, tokenizer, train_config, step, rng,
                            history)


def set_deterministic(enabled=None):
    """Single-threaded, deterministic kernels; on when ``ZSO_DETERMINISTIC=1``."""
    if enabled is None:
        enabled = os.environ.get("ZSO_DETERMINISTIC") == "1"
    if enabled:
        torch.set_num_threads(1)
        torch.use_deterministic_algorithms(True)
    return enabled
