"""Causal decoder-only transformer over continuous trajectory tokens."""

from dataclasses import asdict, dataclass
import math

import numpy as np
import torch
from torch import nn
from torch.nn import functional as F

from zeroshotopt.exceptions import InputError
from zeroshotopt.seqmodel.tokenizer import ACTION, LENGTH, REGRET, STATE


@dataclass(frozen=True)
class ModelConfig:
    n_layer: int = 6
    n_head: int = 8
    n_embd: int = 256
    context_length: int = 512
    bin_count: int = 2000
    max_dim: int = 20
    max_steps: int = 50
    dropout: float = 0.0
    sin_scale: float = 1000.0

    def __post_init__(self):
        if self.n_embd % self.n_head:
            raise InputError("n_embd must be divisible by n_head")
        if self.n_embd % 2:
            raise InputError("n_embd must be even for the sinusoidal embedding")
        if self.context_length < 2:
            raise InputError("context_length too small")

    def to_dict(self):
        return asdict(self)

    @classmethod
    def from_dict(cls, data):
        return cls(**data)

    def max_evals(self, d):
        """Largest number of evaluations that fits the context for dimension ``d``."""
        return (self.context_length - 2) // (d + 1)


def sinusoidal_embedding(values, n_embd, scale):
    """Interleaved sin/cos features of ``values * scale`` (shape ``(..., n_embd)``)."""
    half = n_embd // 2
    k = torch.arange(half, dtype=values.dtype, device=values.device)
    freqs = torch.pow(torch.tensor(10000.0, dtype=values.dtype), -2.0 * k / n_embd)
    angle = (values * scale)[..., None] * freqs
    out = torch.stack([torch.sin(angle), torch.cos(angle)], dim=-1)
    return out.reshape(*values.shape, n_embd)


class CausalSelfAttention(nn.Module):
    def __init__(self, config):
        super().__init__()
        self.n_head = config.n_head
        self.c_attn = nn.Linear(config.n_embd, 3 * config.n_embd)
        self.c_proj = nn.Linear(config.n_embd, config.n_embd)
        self.dropout = config.dropout
        self.resid_dropout = nn.Dropout(config.dropout)

    def forward(self, x):
        B, T, C = x.shape
        q, k, v = self.c_attn(x).split(C, dim=2)
        q = q.view(B, T, self.n_head, C // self.n_head).transpose(1, 2)
        k = k.view(B, T, self.n_head, C // self.n_head).transpose(1, 2)
        v = v.view(B, T, self.n_head, C // self.n_head).transpose(1, 2)
        y = F.scaled_dot_product_attention(
            q, k, v, is_causal=True, dropout_p=self.dropout if self.training else 0.0
        )
        y = y.transpose(1, 2).contiguous().view(B, T, C)
        return self.resid_dropout(self.c_proj(y))


class MLP(nn.Module):
    def __init__(self, config):
        super().__init__()
        self.c_fc = nn.Linear(config.n_embd, 4 * config.n_embd)
        self.c_proj = nn.Linear(4 * config.n_embd, config.n_embd)
        self.dropout = nn.Dropout(config.dropout)

    def forward(self, x):
        return self.dropout(self.c_proj(F.gelu(self.c_fc(x))))


class Block(nn.Module):
    def __init__(self, config):
        super().__init__()
        self.ln_1 = nn.LayerNorm(config.n_embd)
        self.attn = CausalSelfAttention(config)
        self.ln_2 = nn.LayerNorm(config.n_embd)
        self.mlp = MLP(config)

    def forward(self, x):
        x = x + self.attn(self.ln_1(x))
        return x + self.mlp(self.ln_2(x))


class TrajectoryTransformer(nn.Module):
    """Decoder stack; logits at position ``j`` predict the bin of token ``j + 1``."""

    def __init__(self, config):
        super().__init__()
        self.config = config
        n_slots = config.max_dim + 3
        self.slot_emb = nn.Embedding(n_slots, config.n_embd)
        self.step_emb = nn.Embedding(config.max_steps, config.n_embd)
        self.drop = nn.Dropout(config.dropout)
        self.blocks = nn.ModuleList(Block(config) for _ in range(config.n_layer))
        self.ln_f = nn.LayerNorm(config.n_embd)
        self.head = nn.Linear(config.n_embd, config.bin_count)
        self.apply(self._init_weights)
        for name, p in self.named_parameters():
            if name.endswith("c_proj.weight"):
                nn.init.normal_(p, mean=0.0, std=0.02 / math.sqrt(2 * config.n_layer))

    @staticmethod
    def _init_weights(module):
        if isinstance(module, nn.Linear):
            nn.init.normal_(module.weight, mean=0.0, std=0.02)
            if module.bias is not None:
                nn.init.zeros_(module.bias)
        elif isinstance(module, nn.Embedding):
            nn.init.normal_(module.weight, mean=0.0, std=0.02)

    def slot_index(self, kinds, dims):
        cfg = self.config
        slot = torch.where(kinds == ACTION, dims, torch.zeros_like(dims))
        slot = torch.where(kinds == STATE, torch.full_like(dims, cfg.max_dim), slot)
        slot = torch.where(kinds == REGRET, torch.full_like(dims, cfg.max_dim + 1), slot)
        return torch.where(kinds == LENGTH, torch.full_like(dims, cfg.max_dim + 2), slot)

    def embed(self, values, kinds, dims, steps):
        cfg = self.config
        if torch.any((kinds == ACTION) & (dims >= cfg.max_dim)):
            raise InputError(f"action dimension exceeds max_dim={cfg.max_dim}")
        if torch.any(steps >= cfg.max_steps):
            raise InputError(f"step index exceeds max_steps={cfg.max_steps}")
        values = values.to(self.head.weight.dtype)
        sin = sinusoidal_embedding(values, cfg.n_embd, cfg.sin_scale)
        return sin + self.slot_emb(self.slot_index(kinds, dims)) + self.step_emb(steps)

    def forward(self, values, kinds, dims, steps):
        if values.shape[-1] > self.config.context_length:
            raise InputError(
                f"sequence of {values.shape[-1]} tokens exceeds context length "
                f"{self.config.context_length}"
            )
        x = self.drop(self.embed(values, kinds, dims, steps))
        for block in self.blocks:
            x = block(x)
        return self.head(self.ln_f(x))

    def n_params(self):
        return sum(p.numel() for p in self.parameters())


def collate(sequences, tokenizer):
    """Pad token sequences into batch tensors; padding is masked out of the loss."""
    T = max(len(s) for s in sequences)
    B = len(sequences)
    values = np.zeros((B, T))
    kinds = np.full((B, T), STATE, dtype=np.int64)
    dims = np.full((B, T), -1, dtype=np.int64)
    steps = np.zeros((B, T), dtype=np.int64)
    mask = np.zeros((B, T), dtype=bool)
    for i, s in enumerate(sequences):
        n = len(s)
        values[i, :n] = s.values
        kinds[i, :n] = s.kinds
        dims[i, :n] = s.dims
        steps[i, :n] = s.steps
        mask[i, :n] = s.loss_mask
    targets = tokenizer.bin(values)
    return {
        "values": torch.from_numpy(values),
        "kinds": torch.from_numpy(kinds),
        "dims": torch.from_numpy(dims),
        "steps": torch.from_numpy(steps),
        "targets": torch.from_numpy(np.asarray(targets, dtype=np.int64)),
        "mask": torch.from_numpy(mask),
    }


def sequence_loss(logits, targets, mask):
    """Mean cross-entropy of next-token predictions on masked target positions."""
    pred = logits[:, :-1]
    tgt = targets[:, 1:]
    sel = mask[:, 1:]
    if not bool(sel.any()):
        raise InputError("loss mask selects no positions")
    return F.cross_entropy(pred[sel], tgt[sel])


def masked_accuracy(logits, targets, mask):
    sel = mask[:, 1:]
    hit = logits[:, :-1].argmax(dim=-1) == targets[:, 1:]
    return float(hit[sel].double().mean())


def forward_batch(model, batch):
    return model(batch["values"], batch["kinds"], batch["dims"], batch["steps"])
