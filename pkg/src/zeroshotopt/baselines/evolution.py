"""Population-based baselines with an exact evaluation budget.

Every runner starts from the shared initial sample set and then spends one
objective evaluation at a time, so a generation may be cut short when the
budget runs out.
"""

import numpy as np

from zeroshotopt.baselines.bo import _evaluate, evaluate_initial
from zeroshotopt.exceptions import InputError


def _check_steps(steps):
    if steps < 1:
        raise InputError("steps must be >= 1")


def run_random(objective, init_points, steps, seed):
    _check_steps(steps)
    history = evaluate_initial(objective, init_points)
    rng = np.random.default_rng(seed)
    for _ in range(steps):
        x = rng.random(history.dimension)
        history.append(x, _evaluate(objective, x))
    return history


class _CMAES:
    """(mu/mu_w, lambda)-CMA-ES with rank-one and rank-mu updates."""

    def __init__(self, mean, sigma, rng):
        n = mean.shape[0]
        self.n = n
        self.rng = rng
        self.mean = mean.astype(np.float64).copy()
        self.sigma = float(sigma)
        self.lam = 4 + int(3 * np.log(n))
        self.mu = self.lam // 2
        w = np.log(self.mu + 0.5) - np.log(np.arange(1, self.mu + 1))
        self.weights = w / w.sum()
        self.mueff = 1.0 / np.sum(self.weights ** 2)
        self.cc = (4 + self.mueff / n) / (n + 4 + 2 * self.mueff / n)
        self.cs = (self.mueff + 2) / (n + self.mueff + 5)
        self.c1 = 2 / ((n + 1.3) ** 2 + self.mueff)
        self.cmu = min(1 - self.c1,
                       2 * (self.mueff - 2 + 1 / self.mueff) / ((n + 2) ** 2 + self.mueff))
        self.damps = 1 + 2 * max(0.0, np.sqrt((self.mueff - 1) / (n + 1)) - 1) + self.cs
        self.chin = np.sqrt(n) * (1 - 1 / (4 * n) + 1 / (21 * n ** 2))
        self.pc = np.zeros(n)
        self.ps = np.zeros(n)
        self.C = np.eye(n)
        self.B = np.eye(n)
        self.D = np.ones(n)
        self.generation = 0

    def ask(self):
        z = self.rng.standard_normal((self.lam, self.n))
        y = (z * self.D) @ self.B.T
        x = np.clip(self.mean + self.sigma * y, 0.0, 1.0)
        return x

    def tell(self, xs, fs):
        order = np.argsort(fs, kind="stable")[: self.mu]
        # repaired (clipped) points are fed back as if sampled
        ys = (xs[order] - self.mean) / self.sigma
        old_mean = self.mean
        self.mean = old_mean + self.sigma * (self.weights @ ys)
        yw = self.weights @ ys
        invsqrt = self.B @ np.diag(1 / self.D) @ self.B.T
        self.generation += 1
        self.ps = (1 - self.cs) * self.ps + np.sqrt(self.cs * (2 - self.cs) * self.mueff) * (invsqrt @ yw)
        norm_ps = np.linalg.norm(self.ps)
        hsig = norm_ps / np.sqrt(1 - (1 - self.cs) ** (2 * self.generation)) / self.chin < 1.4 + 2 / (self.n + 1)
        self.pc = (1 - self.cc) * self.pc + hsig * np.sqrt(self.cc * (2 - self.cc) * self.mueff) * yw
        rank_mu = (ys.T * self.weights) @ ys
        delta = (1 - hsig) * self.cc * (2 - self.cc)
        self.C = ((1 - self.c1 - self.cmu + self.c1 * delta) * self.C
                  + self.c1 * np.outer(self.pc, self.pc) + self.cmu * rank_mu)
        self.sigma *= np.exp((self.cs / self.damps) * (norm_ps / self.chin - 1))
        self.sigma = float(np.clip(self.sigma, 1e-12, 1.0))
        self.C = 0.5 * (self.C + self.C.T)
        evals, self.B = np.linalg.eigh(self.C)
        self.D = np.sqrt(np.maximum(evals, 1e-20))


def run_cmaes(objective, init_points, steps, seed, sigma0=0.3):
    _check_steps(steps)
    history = evaluate_initial(objective, init_points)
    rng = np.random.default_rng(seed)
    es = _CMAES(history.best()[0], sigma0, rng)
    remaining = steps
    while remaining > 0:
        xs = es.ask()
        fs = []
        for x in xs[:remaining]:
            fx = _evaluate(objective, x)
            history.append(x, fx)
            fs.append(fx)
        remaining -= len(fs)
        if len(fs) == len(xs):
            es.tell(xs, np.asarray(fs))
    return history


def run_pso(objective, init_points, steps, seed, inertia=0.7298, c1=1.49618, c2=1.49618,
            vmax=0.5):
    """Asynchronous PSO: particles are the initial points, updated round-robin."""
    _check_steps(steps)
    history = evaluate_initial(objective, init_points)
    rng = np.random.default_rng(seed)
    pos = history.points.copy()
    n, d = pos.shape
    vel = rng.uniform(-0.1, 0.1, size=(n, d))
    pbest = pos.copy()
    pbest_f = history.values.copy()
    g = int(np.argmin(pbest_f))
    for t in range(steps):
        i = t % n
        r1, r2 = rng.random(d), rng.random(d)
        vel[i] = inertia * vel[i] + c1 * r1 * (pbest[i] - pos[i]) + c2 * r2 * (pbest[g] - pos[i])
        vel[i] = np.clip(vel[i], -vmax, vmax)
        pos[i] = np.clip(pos[i] + vel[i], 0.0, 1.0)
        fx = _evaluate(objective, pos[i])
        history.append(pos[i], fx)
        if fx < pbest_f[i]:
            pbest[i], pbest_f[i] = pos[i].copy(), fx
            if fx < pbest_f[g]:
                g = i
    return history


def run_de(objective, init_points, steps, seed, F=0.8, CR=0.9):
    """Steady-state DE/rand/1/bin seeded with the initial points."""
    _check_steps(steps)
    history = evaluate_initial(objective, init_points)
    rng = np.random.default_rng(seed)
    pop = history.points.copy()
    fit = history.values.copy()
    n, d = pop.shape
    if n < 4:
        raise InputError("differential evolution needs at least 4 initial points")
    for t in range(steps):
        i = t % n
        others = [j for j in range(n) if j != i]
        a, b, c = rng.choice(others, 3, replace=False)
        mutant = pop[a] + F * (pop[b] - pop[c])
        cross = rng.random(d) < CR
        cross[rng.integers(d)] = True
        trial = np.clip(np.where(cross, mutant, pop[i]), 0.0, 1.0)
        fx = _evaluate(objective, trial)
        history.append(trial, fx)
        if fx <= fit[i]:
            pop[i], fit[i] = trial, fx
    return history


RUNNERS = {
    "CMA-ES": run_cmaes,
    "PSO": run_pso,
    "DE": run_de,
    "Random": run_random,
}
