"""Inference-time optimizer driven by a trained trajectory transformer."""

from dataclasses import asdict, dataclass
import logging

import numpy as np
from scipy.stats import qmc
import torch

from zeroshotopt.exceptions import InputError
from zeroshotopt.history import History
from zeroshotopt.seqmodel.tokenizer import (
    ACTION,
    LENGTH_SCALE,
    TokenizerConfig,
    encode_tokens,
    sequence_length,
)

logger = logging.getLogger(__name__)

SCALINGS = ("fixed", "scaled", "scaled_high")
DEGENERATE_SPAN = 1e-12


class OptimizationAborted(RuntimeError):
    """The objective raised; ``history`` holds the evaluations made so far."""

    def __init__(self, message, history):
        super().__init__(message)
        self.history = history


def scaling_coefficients(kind, t, L):
    """Return ``(c_upper, c_lower)`` for step ``t`` of ``L``."""
    if kind not in SCALINGS:
        raise InputError(f"unknown scaling {kind!r}; choose from {SCALINGS}")
    if kind == "fixed":
        return 0.1, 0.2
    frac = (L - t) / L
    c_upper = 0.05 + 0.05 * frac
    if kind == "scaled":
        return c_upper, 0.1 + 0.15 * frac
    return c_upper, 0.1 + 0.4 * frac


def scale_states(values, kind, t, L):
    """Affinely map the observed values so min -> C_l and max -> 1 - C_u."""
    values = np.asarray(values, dtype=np.float64)
    if values.shape[0] < 2:
        raise InputError("need at least two values to scale")
    if not 0 <= t <= L:
        raise InputError(f"step {t} outside [0, {L}]")
    c_upper, c_lower = scaling_coefficients(kind, t, L)
    lo, hi = values.min(), values.max()
    if hi - lo <= DEGENERATE_SPAN:
        return np.full_like(values, 0.5 * (c_lower + 1.0 - c_upper))
    return (values - lo) / (hi - lo) * (1.0 - c_upper - c_lower) + c_lower


def nucleus(probs, p):
    """Smallest probability-sorted prefix with mass >= ``p``, renormalized.

    Ties in probability are ordered by lower bin index.
    """
    probs = np.asarray(probs, dtype=np.float64)
    if not 0 < p <= 1:
        raise InputError("p must be in (0, 1]")
    order = np.argsort(-probs, kind="stable")
    cum = np.cumsum(probs[order])
    cut = int(np.searchsorted(cum, p * cum[-1] - 1e-12, side="left")) + 1
    keep = order[:min(cut, probs.shape[0])]
    return keep, probs[keep] / probs[keep].sum()


def top_p_sample(probs, p, seed):
    keep, kept = nucleus(probs, p)
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    idx = int(np.searchsorted(np.cumsum(kept), rng.random(), side="right"))
    return int(keep[min(idx, keep.shape[0] - 1)])


@dataclass(frozen=True)
class OptimizeConfig:
    budget: int = 50
    init_count: int = 10
    candidates: int = 4
    top_p: float = 0.9
    target_regret: float = 0.0
    scaling: str = "scaled_high"
    init_design: str = "uniform"
    seed: int = 0

    def __post_init__(self):
        if self.budget <= self.init_count or self.init_count < 1:
            raise InputError("need budget > init_count >= 1")
        if not 0 < self.top_p <= 1:
            raise InputError("top_p must be in (0, 1]")
        if self.candidates < 1:
            raise InputError("candidates must be >= 1")
        if self.scaling not in SCALINGS:
            raise InputError(f"unknown scaling {self.scaling!r}")
        if self.init_design not in ("uniform", "lhs"):
            raise InputError("init_design must be 'uniform' or 'lhs'")

    def to_dict(self):
        return asdict(self)


def initial_design(d, config):
    rng = np.random.default_rng(np.random.SeedSequence([config.seed, 0]))
    if config.init_design == "lhs":
        return qmc.LatinHypercube(d, seed=rng).random(config.init_count)
    return rng.random((config.init_count, d))


def _tensors(seq, k, device_dtype):
    def rep(a, dtype):
        return torch.as_tensor(np.tile(a, (k, 1)), dtype=dtype)
    return (rep(seq.values, device_dtype), rep(seq.kinds, torch.long),
            rep(seq.dims, torch.long), rep(seq.steps, torch.long))


def check_horizon(model, d, budget):
    cfg = model.config
    if d > cfg.max_dim or budget > cfg.max_steps or sequence_length(budget, d) > cfg.context_length:
        raise InputError(
            f"budget {budget} in {d}-D exceeds the model horizon: max_dim={cfg.max_dim}, "
            f"max_steps={cfg.max_steps}, max evaluations at d={d} is "
            f"{min(cfg.max_steps, cfg.max_evals(d))}"
        )


@torch.no_grad()
def propose_candidates(model, history, config, t, tokenizer=None):
    """Sample ``config.candidates`` actions and their predicted state distributions."""
    d = history.dimension
    n = len(history)
    if n < config.init_count:
        raise InputError("history shorter than the initial design")
    check_horizon(model, d, max(config.budget, n + 1))
    tokenizer = tokenizer or TokenizerConfig(model.config.bin_count)
    L = config.budget - config.init_count
    states = scale_states(history.values, config.scaling, t, L)
    seq = encode_tokens(config.target_regret, L / LENGTH_SCALE, history.points, states,
                        config.init_count)
    k = config.candidates
    dtype = model.head.weight.dtype
    values, kinds, dims, steps = _tensors(seq, k, dtype)
    rngs = [np.random.default_rng(np.random.SeedSequence([config.seed, 1, n, c]))
            for c in range(k)]
    actions = np.zeros((k, d))
    for j in range(d):
        logits = model(values, kinds, dims, steps)[:, -1].double()
        probs = torch.softmax(logits, dim=-1).numpy()
        bins = [top_p_sample(probs[c], config.top_p, rngs[c]) for c in range(k)]
        actions[:, j] = tokenizer.unbin(np.asarray(bins))
        values = torch.cat([values, torch.as_tensor(actions[:, j:j + 1], dtype=dtype)], dim=1)
        kinds = torch.cat([kinds, torch.full((k, 1), ACTION, dtype=torch.long)], dim=1)
        dims = torch.cat([dims, torch.full((k, 1), j, dtype=torch.long)], dim=1)
        steps = torch.cat([steps, torch.full((k, 1), n, dtype=torch.long)], dim=1)
    logits = model(values, kinds, dims, steps)[:, -1].double()
    dists = torch.softmax(logits, dim=-1).numpy()
    return [(actions[c].copy(), dists[c]) for c in range(k)]


def discrete_ei(dist, best, centers):
    return float(np.sum(dist * np.maximum(0.0, best - centers)))


def select_candidate(candidates, best, bin_count=None):
    """Index of the candidate with the largest discrete expected improvement."""
    if not candidates:
        raise InputError("no candidates to select from")
    bins = bin_count or len(candidates[0][1])
    centers = (np.arange(bins) + 0.5) / bins
    eis = [discrete_ei(np.asarray(dist), best, centers) for _, dist in candidates]
    return int(np.argmax(eis)), eis


def optimize(model, objective, dimension, config=OptimizeConfig(), init_points=None):
    """Minimize ``objective`` over the unit box with exactly ``config.budget`` evaluations."""
    check_horizon(model, dimension, config.budget)
    model.eval()
    if init_points is None:
        init_points = initial_design(dimension, config)
    init_points = np.asarray(init_points, dtype=np.float64)
    if init_points.shape != (config.init_count, dimension):
        raise InputError(f"init_points must have shape ({config.init_count}, {dimension})")
    history = History.empty(dimension)
    tokenizer = TokenizerConfig(model.config.bin_count)

    def run(x, **info):
        try:
            value = float(objective(x))
        except Exception as exc:
            raise OptimizationAborted(f"objective failed at step {len(history)}: {exc}",
                                      history) from exc
        history.append(x, value, **info)

    for x in init_points:
        run(x)
    L = config.budget - config.init_count
    for t in range(L):
        candidates = propose_candidates(model, history, config, t, tokenizer)
        best = float(np.min(scale_states(history.values, config.scaling, t, L)))
        idx, eis = select_candidate(candidates, best, model.config.bin_count)
        run(candidates[idx][0], selected=idx, candidate_eis=eis)
    return history
