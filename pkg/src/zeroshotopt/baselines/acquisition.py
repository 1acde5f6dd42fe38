"""Acquisition functions for minimization.

EI, LogEI and MES scores are "higher is better"; the UCB variant returns a
lower confidence bound, which is minimized.
"""

import numpy as np
from scipy.special import erfcx, log_ndtr, ndtr

from zeroshotopt.exceptions import InputError
from zeroshotopt.search import sobol_points

LOG_EI_FLOOR = -np.finfo(np.float64).max
TAIL_THRESHOLD = -6.0

_INV_SQRT_2PI = 1.0 / np.sqrt(2.0 * np.pi)
_LOG_SQRT_2PI = 0.5 * np.log(2.0 * np.pi)
_SQRT_HALF_PI = np.sqrt(0.5 * np.pi)


def _as_arrays(mean, variance):
    mean = np.asarray(mean, dtype=np.float64)
    variance = np.asarray(variance, dtype=np.float64)
    if np.any(variance < 0):
        raise InputError("variance must be non-negative")
    return mean, variance


def _broadcast(mean, variance, best):
    mean, variance = _as_arrays(mean, variance)
    shape = np.broadcast(mean, variance, np.asarray(best)).shape
    sigma = np.sqrt(np.broadcast_to(variance, shape))
    gap = np.broadcast_to(best - mean, shape)
    return gap, sigma


def acq_ei(mean, variance, best):
    """Closed-form expected improvement below ``best``."""
    gap, sigma = _broadcast(mean, variance, best)
    out = np.array(np.maximum(gap, 0.0), dtype=np.float64)
    pos = sigma > 0
    if np.any(pos):
        u = gap[pos] / sigma[pos]
        out[pos] = gap[pos] * ndtr(u) + sigma[pos] * _INV_SQRT_2PI * np.exp(-0.5 * u * u)
    return float(out) if out.ndim == 0 else out


def _log_h(u):
    """log(u * Phi(u) + phi(u)), stable for very negative u."""
    u = np.asarray(u, dtype=np.float64)
    out = np.empty_like(u)
    upper = u >= TAIL_THRESHOLD
    uu = u[upper]
    out[upper] = np.log(uu * ndtr(uu) + _INV_SQRT_2PI * np.exp(-0.5 * uu * uu))
    ul = u[~upper]
    # phi(u) * (1 + u * Phi(u) / phi(u)), Mills ratio via scaled erfc
    ratio_term = 1.0 + ul * _SQRT_HALF_PI * erfcx(-ul / np.sqrt(2.0))
    far = ul < -1e6
    tail = np.where(far, -2.0 * np.log(np.abs(ul)), np.log(np.where(far, 1.0, ratio_term)))
    out[~upper] = -0.5 * ul * ul - _LOG_SQRT_2PI + tail
    return out


def acq_logei(mean, variance, best):
    """Logarithm of expected improvement without underflow in the far tail."""
    gap, sigma = _broadcast(mean, variance, best)
    out = np.full(gap.shape, LOG_EI_FLOOR)
    pos = sigma > 0
    if np.any(pos):
        u = gap[pos] / sigma[pos]
        out[pos] = np.log(sigma[pos]) + _log_h(u)
    det = ~pos & (gap > 0)
    out[det] = np.log(gap[det])
    return float(out) if out.ndim == 0 else out


def acq_ucb(mean, variance, beta=2.0):
    """Lower confidence bound ``mean - beta * std`` (smaller is better)."""
    if not beta >= 0:
        raise InputError("beta must be non-negative")
    mean, variance = _as_arrays(mean, variance)
    out = mean - beta * np.sqrt(variance)
    return float(out) if out.ndim == 0 else out


def _max_cdf(y, mean, sigma):
    # P(max_i g_i <= y) for independent normals, in log space
    return np.exp(log_ndtr((y[:, None] - mean[None, :]) / sigma[None, :]).sum(axis=1))


def gumbel_max_samples(mean, sigma, n_samples, rng, floor=None):
    """Approximate samples of ``max_i g_i`` via a Gumbel fit to its CDF."""
    lo = float(np.min(mean - 5.0 * sigma))
    hi = float(np.max(mean + 5.0 * sigma))
    qs = np.array([0.25, 0.5, 0.75])
    a = np.full(3, lo)
    b = np.full(3, hi)
    for _ in range(100):
        mid = 0.5 * (a + b)
        below = _max_cdf(mid, mean, sigma) < qs
        a = np.where(below, mid, a)
        b = np.where(below, b, mid)
        if np.max(b - a) < 1e-10 * max(1.0, abs(hi)):
            break
    y25, y50, y75 = 0.5 * (a + b)
    scale = (y75 - y25) / (np.log(np.log(4.0)) - np.log(np.log(4.0 / 3.0)))
    scale = max(scale, 1e-12)
    loc = y50 + scale * np.log(np.log(2.0))
    u = rng.uniform(size=n_samples)
    samples = loc - scale * np.log(-np.log(u))
    if floor is not None:
        samples = np.maximum(samples, floor + 1e-6)
    return samples


def mes_score(mean_g, var_g, max_samples, var_floor=0.0):
    """Average entropy reduction for maximizing ``g`` given max-value samples."""
    mean_g = np.asarray(mean_g, dtype=np.float64)
    var_g = np.asarray(var_g, dtype=np.float64)
    sigma = np.sqrt(np.maximum(var_g, 1e-300))
    gamma = (max_samples[None, :] - mean_g[:, None]) / sigma[:, None]
    log_cdf = log_ndtr(gamma)
    # gamma * phi / (2 Phi) computed as gamma/2 * exp(log phi - log Phi)
    log_pdf = -0.5 * gamma * gamma - _LOG_SQRT_2PI
    score = (0.5 * gamma * np.exp(log_pdf - log_cdf) - log_cdf).mean(axis=1)
    score = np.maximum(score, 0.0)
    score[var_g <= var_floor] = 0.0
    return score


class MesState:
    """Max-value samples for one BO step, reused while refining candidates."""

    def __init__(self, gp, n_samples, seed, probe_points=None):
        rng = np.random.default_rng(seed)
        d = gp.dimension
        if probe_points is None:
            probe_points = sobol_points(256 * d, d, rng.integers(2**63))
        probe = np.vstack([probe_points, gp.support_points])
        mean, var = gp.predict(probe)
        self.gp = gp
        self.var_floor = 10.0 * gp.jitter * gp.outputscale
        sigma = np.sqrt(var)
        informative = var > self.var_floor
        self.degenerate = not np.any(informative)
        if self.degenerate:
            self.samples = np.zeros(n_samples)
            return
        # maximize g = -f; observed max of g is -min(targets)
        floor = float(np.max(-gp.targets)) if gp.targets.size else None
        self.samples = gumbel_max_samples(-mean[informative], sigma[informative],
                                          n_samples, rng, floor)

    def __call__(self, X):
        if self.degenerate:
            return np.zeros(np.atleast_2d(X).shape[0])
        mean, var = self.gp.predict(X)
        return mes_score(-mean, var, self.samples, self.var_floor)


def acq_mes_values(gp, candidates, K=16, seed=0, probe_points=None):
    """MES scores for ``candidates`` using ``K`` Gumbel max-value samples."""
    if K < 1:
        raise InputError("K must be at least 1")
    candidates = np.atleast_2d(np.asarray(candidates, dtype=np.float64))
    if candidates.shape[0] == 0:
        raise InputError("candidates must be non-empty")
    if probe_points is None:
        probe_points = np.vstack([candidates, sobol_points(256 * gp.dimension, gp.dimension, seed)])
    return MesState(gp, K, seed, probe_points)(candidates)
