"""GP-based Bayesian optimization with a fixed menu of acquisitions."""

from dataclasses import asdict, dataclass
import logging

import numpy as np
from sklearn.base import BaseEstimator

from zeroshotopt.baselines.acquisition import MesState, acq_ei, acq_logei, acq_ucb
from zeroshotopt.exceptions import InputError, NumericalError
from zeroshotopt.gp import KernelSpec, fit_posterior, posterior_sample_batch, select_lengthscale
from zeroshotopt.history import History
from zeroshotopt.search import coordinate_descent, sobol_points
from zeroshotopt.validation import check_unit_box

logger = logging.getLogger(__name__)

ACQUISITIONS = ("EI", "LogEI", "UCB", "MES", "TS")
SURROGATE_KERNELS = ("RBF", "Matern52")
_KERNEL_KIND = {"RBF": "rbf", "Matern52": "matern52"}

LENGTHSCALE_GRID = np.geomspace(0.05, 5.0, 25)


@dataclass(frozen=True)
class BoVariant:
    acquisition: str = "EI"
    kernel: str = "Matern52"
    beta: float = 2.0
    mes_samples: int = 16
    candidates_per_dim: int = 1024
    ts_candidates: int = 512
    refine_rounds: int = 10

    def __post_init__(self):
        if self.acquisition not in ACQUISITIONS:
            raise InputError(f"unknown acquisition {self.acquisition!r}; choose from {ACQUISITIONS}")
        if self.kernel not in SURROGATE_KERNELS:
            raise InputError(f"unknown surrogate kernel {self.kernel!r}")
        if self.beta <= 0 or self.mes_samples < 1 or self.candidates_per_dim < 1:
            raise InputError("acquisition parameters must be positive")

    @property
    def name(self):
        return f"{self.acquisition}-{self.kernel}"

    @classmethod
    def from_name(cls, name, **kwargs):
        acq, _, kernel = name.partition("-")
        return cls(acquisition=acq, kernel=kernel or "Matern52", **kwargs)

    def to_dict(self):
        return asdict(self)


def all_variants():
    return [BoVariant(a, k) for a in ACQUISITIONS for k in SURROGATE_KERNELS]


def fit_surrogate(points, values, kernel="Matern52", grid=LENGTHSCALE_GRID):
    """Standardize ``values`` and fit a GP with maximum-likelihood lengthscale."""
    mu = float(np.mean(values))
    sd = float(np.std(values))
    sd = sd if sd > 1e-12 else 1.0
    y = (np.asarray(values) - mu) / sd
    kind = _KERNEL_KIND[kernel]
    ls, scale, _ = select_lengthscale(points, y, kind, grid)
    return fit_posterior(points, y, KernelSpec.base(kind, ls), outputscale=scale)


def _score_fn(gp, variant, best, rng):
    """Return a vectorized score to maximize over candidate points."""
    if variant.acquisition == "EI":
        def score(X):
            mean, var = gp.predict(X)
            return acq_ei(mean, var, best)
    elif variant.acquisition == "LogEI":
        def score(X):
            mean, var = gp.predict(X)
            return acq_logei(mean, var, best)
    elif variant.acquisition == "UCB":
        def score(X):
            mean, var = gp.predict(X)
            return -acq_ucb(mean, var, variant.beta)
    elif variant.acquisition == "MES":
        score = MesState(gp, variant.mes_samples, rng.integers(2**63))
    else:
        raise InputError(f"no pointwise score for {variant.acquisition}")
    return score


def bo_step(history, variant, dimension, seed):
    """Propose the next point given ``history``; always inside the unit box."""
    if len(history) == 0:
        raise InputError("history must be non-empty")
    rng = np.random.default_rng(seed)
    try:
        gp = fit_surrogate(history.points, history.values, variant.kernel)
    except NumericalError as exc:
        logger.warning("surrogate fit failed (%s); proposing a random point", exc)
        return rng.random(dimension)
    n_cand = variant.candidates_per_dim * dimension
    if variant.acquisition == "TS":
        cand = sobol_points(min(n_cand, variant.ts_candidates), dimension, rng.integers(2**63))
        try:
            draw = posterior_sample_batch(gp, cand, rng.integers(2**63))
        except NumericalError as exc:
            logger.warning("Thompson draw failed (%s); proposing a random point", exc)
            return rng.random(dimension)
        return cand[int(np.argmin(draw))].copy()
    cand = sobol_points(n_cand, dimension, rng.integers(2**63))
    best = float(np.min(gp.targets))
    score = _score_fn(gp, variant, best, rng)
    values = score(cand)
    start = cand[int(np.argmax(values))]
    step = 0.5 / n_cand ** (1.0 / dimension)
    x, _ = coordinate_descent(lambda X: -score(X), start[None, :], variant.refine_rounds,
                              init_step=step)
    return np.clip(x[0], 0.0, 1.0)


def _evaluate(objective, x):
    return float(objective(np.asarray(x, dtype=np.float64)))


def evaluate_initial(objective, init_points):
    init_points = check_unit_box(init_points, name="init_points")
    return History(init_points, [_evaluate(objective, x) for x in init_points])


def run_bo(objective, variant, init_points, steps, seed):
    """Evaluate ``init_points`` then take ``steps`` BO proposals."""
    if steps < 1:
        raise InputError("steps must be >= 1")
    history = evaluate_initial(objective, init_points)
    d = history.dimension
    seeds = np.random.SeedSequence(int(seed)).spawn(steps)
    for t in range(steps):
        x = bo_step(history, variant, d, seeds[t])
        history.append(x, _evaluate(objective, x))
    return history


class BayesianOptimizer(BaseEstimator):
    """Estimator-style wrapper: ``BayesianOptimizer("EI", "Matern52").minimize(f, X0, 40)``."""

    def __init__(self, acquisition="EI", kernel="Matern52", beta=2.0, mes_samples=16,
                 random_state=0):
        self.acquisition = acquisition
        self.kernel = kernel
        self.beta = beta
        self.mes_samples = mes_samples
        self.random_state = random_state

    def minimize(self, objective, init_points, steps):
        variant = BoVariant(self.acquisition, self.kernel, self.beta, self.mes_samples)
        self.history_ = run_bo(objective, variant, init_points, steps, self.random_state)
        return self.history_
