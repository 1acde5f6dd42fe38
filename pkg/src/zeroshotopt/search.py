"""Small derivative-free search routines over the unit box."""

import numpy as np
from scipy.stats import qmc


def sobol_points(n, d, seed):
    """``n`` scrambled Sobol points in ``[0, 1]^d`` (drawn in a power-of-two block)."""
    sampler = qmc.Sobol(d, scramble=True, seed=np.random.default_rng(seed))
    return sampler.random_base2(int(np.ceil(np.log2(max(n, 2)))))[:n]


def coordinate_descent(func, starts, steps, init_step=0.1, min_step=1e-9):
    """Batched compass search along coordinate axes, clipped to the box.

    ``func`` maps an (n, d) array to n values to be minimized. Each start
    halves its step whenever a sweep over all 2*d moves fails to improve.
    Returns the final points and values.
    """
    x = np.array(starts, dtype=np.float64, ndmin=2)
    fx = np.asarray(func(x), dtype=np.float64)
    n, d = x.shape
    step = np.full(n, float(init_step))
    moves = np.concatenate([np.eye(d), -np.eye(d)])
    for _ in range(steps):
        active = step > min_step
        if not active.any():
            break
        trial = np.clip(x[:, None, :] + step[:, None, None] * moves[None], 0.0, 1.0)
        ft = np.asarray(func(trial.reshape(-1, d)), dtype=np.float64).reshape(n, 2 * d)
        j = np.argmin(ft, axis=1)
        best = ft[np.arange(n), j]
        improved = (best < fx) & active
        x[improved] = trial[improved, j[improved]]
        fx[improved] = best[improved]
        step[~improved] *= 0.5
    return x, fx
