"""Kernels and exact Gaussian-process regression.

Everything here works in float64. A fitted :class:`GpPosterior` is immutable
and can be shared between threads for prediction.
"""

from dataclasses import dataclass, field
import itertools
import logging

import numpy as np
from scipy.linalg import cho_solve, solve_triangular
from scipy.spatial.distance import cdist
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.utils.validation import check_is_fitted

from zeroshotopt.exceptions import InputError, NumericalError
from zeroshotopt.validation import check_points, check_seed, check_vector

logger = logging.getLogger(__name__)

KERNEL_KINDS = ("rbf", "matern32", "matern52", "exponential", "cosine", "quadratic")
KERNEL_FORMS = ("base", "sum", "product")

JITTER_START = 1e-6
JITTER_MAX = 1e-2
RQ_ALPHA = 2.0

_SQRT3 = np.sqrt(3.0)
_SQRT5 = np.sqrt(5.0)


@dataclass(frozen=True)
class KernelSpec:
    """A covariance recipe: one base kernel, or a sum/product of two.

    Both parts of a composition share ``lengthscale``.
    """

    form: str
    kinds: tuple
    lengthscale: float = 1.0

    def __post_init__(self):
        kinds = tuple(self.kinds)
        object.__setattr__(self, "kinds", kinds)
        if self.form not in KERNEL_FORMS:
            raise InputError(f"unknown kernel form {self.form!r}")
        expected = 1 if self.form == "base" else 2
        if len(kinds) != expected:
            raise InputError(f"form {self.form!r} takes {expected} kind(s), got {kinds}")
        for kind in kinds:
            if kind not in KERNEL_KINDS:
                raise InputError(f"unknown kernel kind {kind!r}")
        if not self.lengthscale > 0:
            raise InputError("lengthscale must be positive")

    @classmethod
    def base(cls, kind, lengthscale=1.0):
        return cls("base", (kind,), lengthscale)

    def with_lengthscale(self, lengthscale):
        return KernelSpec(self.form, self.kinds, lengthscale)

    def to_dict(self):
        return {"form": self.form, "kinds": list(self.kinds), "lengthscale": self.lengthscale}

    @classmethod
    def from_dict(cls, data):
        return cls(data["form"], tuple(data["kinds"]), float(data["lengthscale"]))

    def __str__(self):
        if self.form == "base":
            body = self.kinds[0]
        else:
            op = "+" if self.form == "sum" else "*"
            body = f"{self.kinds[0]}{op}{self.kinds[1]}"
        return f"{body}(l={self.lengthscale:.4g})"


def enumerate_kernel_forms():
    """All (form, kinds) combinations; ordered pairs for compositions."""
    combos = [("base", (k,)) for k in KERNEL_KINDS]
    for form in ("sum", "product"):
        combos += [(form, pair) for pair in itertools.product(KERNEL_KINDS, repeat=2)]
    return combos


def _stationary(kind, r, lengthscale):
    s = r / lengthscale
    if kind == "rbf":
        return np.exp(-0.5 * s * s)
    if kind == "matern32":
        return (1.0 + _SQRT3 * s) * np.exp(-_SQRT3 * s)
    if kind == "matern52":
        return (1.0 + _SQRT5 * s + (5.0 / 3.0) * s * s) * np.exp(-_SQRT5 * s)
    if kind == "exponential":
        return np.exp(-s)
    if kind == "quadratic":
        return (1.0 + s * s / (2.0 * RQ_ALPHA)) ** (-RQ_ALPHA)
    raise InputError(f"unknown kernel kind {kind!r}")


def _part(kind, X1, X2, lengthscale, dist):
    if kind == "cosine":
        # cos of the summed displacement: a single-frequency spectral kernel,
        # positive semi-definite in every dimension (matches cos(r/l) in 1-D).
        proj = np.subtract.outer(X1.sum(axis=1), X2.sum(axis=1))
        return np.cos(proj / lengthscale)
    return _stationary(kind, dist, lengthscale)


def kernel_matrix(spec, X1, X2=None):
    """Cross-covariance matrix ``k(X1[i], X2[j])`` for a :class:`KernelSpec`."""
    X1 = np.atleast_2d(np.asarray(X1, dtype=np.float64))
    X2 = X1 if X2 is None else np.atleast_2d(np.asarray(X2, dtype=np.float64))
    if X1.shape[1] != X2.shape[1]:
        raise InputError(f"dimension mismatch: {X1.shape[1]} vs {X2.shape[1]}")
    needs_dist = any(k != "cosine" for k in spec.kinds)
    dist = cdist(X1, X2) if needs_dist else None
    parts = [_part(k, X1, X2, spec.lengthscale, dist) for k in spec.kinds]
    if spec.form == "base":
        return parts[0]
    if spec.form == "sum":
        return parts[0] + parts[1]
    return parts[0] * parts[1]


def kernel_diag(spec, X):
    """Diagonal ``k(x, x)``; every supported kernel is 1 at zero distance."""
    n = np.atleast_2d(X).shape[0]
    return np.full(n, 2.0 if spec.form == "sum" else 1.0)


def kernel_eval(spec, x, x_prime):
    x = check_vector(x, name="x")
    x_prime = check_vector(x_prime, x.shape[0], name="x_prime")
    return float(kernel_matrix(spec, x[None, :], x_prime[None, :])[0, 0])


def cholesky_with_jitter(K, jitter=JITTER_START, max_jitter=JITTER_MAX):
    """Cholesky of ``K + jitter*I``, multiplying jitter by 10 on failure.

    Returns ``(L, jitter_used)``. Raises :class:`NumericalError` once the
    jitter would exceed ``max_jitter``.
    """
    n = K.shape[0]
    eye = np.eye(n)
    current = jitter
    while current <= max_jitter * (1 + 1e-9):
        try:
            return np.linalg.cholesky(K + current * eye), current
        except np.linalg.LinAlgError:
            current *= 10.0
    eig_min = float(np.linalg.eigvalsh(K)[0]) if n else float("nan")
    raise NumericalError(
        f"matrix of size {n} not positive definite with jitter up to {max_jitter:g} "
        f"(smallest eigenvalue {eig_min:.3e})"
    )


@dataclass(frozen=True, eq=False)
class GpPosterior:
    """Exact GP posterior conditioned on noise-free support points.

    ``outputscale`` multiplies the kernel; the posterior mean does not
    depend on it.
    """

    support_points: np.ndarray
    targets: np.ndarray
    kernel: KernelSpec
    jitter: float
    cholesky_factor: np.ndarray
    alpha_weights: np.ndarray
    outputscale: float = 1.0
    _meta: dict = field(default_factory=dict, repr=False)

    @property
    def dimension(self):
        return self.support_points.shape[1]

    def cross_cov(self, X):
        return kernel_matrix(self.kernel, X, self.support_points)

    def predict(self, X, return_var=True):
        """Posterior mean (and variance) at the rows of ``X``."""
        X = check_points(X, self.dimension)
        Ks = self.cross_cov(X)
        mean = Ks @ self.alpha_weights
        if not return_var:
            return mean
        v = solve_triangular(self.cholesky_factor, Ks.T, lower=True, check_finite=False)
        var = kernel_diag(self.kernel, X) - np.einsum("ij,ij->j", v, v)
        return mean, self.outputscale * np.maximum(var, 0.0)

    def predict_cov(self, X):
        X = check_points(X, self.dimension)
        Ks = self.cross_cov(X)
        mean = Ks @ self.alpha_weights
        v = solve_triangular(self.cholesky_factor, Ks.T, lower=True, check_finite=False)
        cov = kernel_matrix(self.kernel, X) - v.T @ v
        return mean, self.outputscale * 0.5 * (cov + cov.T)

    def sample(self, X, seed):
        return posterior_sample_batch(self, X, seed)


def fit_posterior(X, y, kernel, jitter=JITTER_START, outputscale=1.0):
    """Condition a GP with ``kernel`` on ``(X, y)``.

    The jitter escalates by factors of ten when the Gram matrix is not
    numerically positive definite.
    """
    X = check_points(X)
    y = np.asarray(y, dtype=np.float64).ravel()
    if X.shape[0] < 1 or X.shape[0] != y.shape[0]:
        raise InputError(f"need |X| = |y| >= 1, got {X.shape[0]} and {y.shape[0]}")
    if not jitter > 0:
        raise InputError("jitter must be positive")
    K = kernel_matrix(kernel, X)
    L, used = cholesky_with_jitter(K, jitter)
    if used != jitter:
        logger.debug("jitter escalated from %g to %g for %s", jitter, used, kernel)
    alpha = cho_solve((L, True), y, check_finite=False)
    return GpPosterior(X, y, kernel, used, L, alpha, float(outputscale))


def posterior_predict(gp, x):
    x = check_vector(x, gp.dimension)
    mean, var = gp.predict(x[None, :])
    return float(mean[0]), float(var[0])


def posterior_sample_batch(gp, points, seed):
    """One joint posterior draw at ``points``, deterministic in ``seed``."""
    points = check_points(points, gp.dimension, "points")
    mean, cov = gp.predict_cov(points)
    scale = max(gp.outputscale, 1e-300)
    try:
        # jitter only when needed; it would otherwise inflate tiny variances
        L = np.linalg.cholesky(cov / scale)
    except np.linalg.LinAlgError:
        L, _ = cholesky_with_jitter(cov / scale, JITTER_START)
    eps = check_seed(seed).standard_normal(points.shape[0])
    return mean + np.sqrt(scale) * (L @ eps)


def log_marginal_likelihood(gp):
    """Exact log evidence of the support data under ``outputscale * k``."""
    n = gp.targets.shape[0]
    quad = gp.targets @ gp.alpha_weights / gp.outputscale
    logdet = 2.0 * np.log(np.diag(gp.cholesky_factor)).sum() + n * np.log(gp.outputscale)
    return float(-0.5 * quad - 0.5 * logdet - 0.5 * n * np.log(2 * np.pi))


def select_lengthscale(X, y, kind, grid, jitter=JITTER_START):
    """Maximum-likelihood lengthscale over ``grid`` for a unit-form base kernel.

    The signal variance is profiled out in closed form. Returns
    ``(lengthscale, outputscale, log_likelihood)``.
    """
    X = check_points(X)
    y = np.asarray(y, dtype=np.float64)
    n = X.shape[0]
    grid = np.asarray(grid, dtype=np.float64)
    dist = cdist(X, X)
    Ks = np.stack([_stationary(kind, dist, ls) for ls in grid])
    Ks += jitter * np.eye(n)
    try:
        Ls = np.linalg.cholesky(Ks)
    except np.linalg.LinAlgError:
        Ls = None
    best = (None, None, -np.inf)
    for i, ls in enumerate(grid):
        if Ls is not None:
            L = Ls[i]
        else:
            try:
                L, _ = cholesky_with_jitter(Ks[i] - jitter * np.eye(n), jitter)
            except NumericalError:
                continue
        a = cho_solve((L, True), y, check_finite=False)
        s2 = max(float(y @ a) / n, 1e-12)
        lml = -0.5 * n * np.log(s2) - np.log(np.diag(L)).sum() - 0.5 * n * (1 + np.log(2 * np.pi))
        if lml > best[2]:
            best = (float(ls), s2, float(lml))
    if best[0] is None:
        raise NumericalError(f"no lengthscale in grid gives a valid {kind} factorization")
    return best


class GaussianProcess(RegressorMixin, BaseEstimator):
    """Exact GP regressor with an sklearn-compatible interface.

    Parameters
    ----------
    kernel : str or KernelSpec, default="rbf"
        Base kernel kind or a full :class:`KernelSpec`.
    lengthscale : float, default=1.0
        Used when ``kernel`` is a kind name and ``lengthscale_grid`` is None.
    jitter : float, default=1e-6
        Initial diagonal regularization; escalated on factorization failure.
    lengthscale_grid : array-like or None
        If given, the lengthscale (and the signal variance) is chosen by
        maximizing the marginal likelihood over these values.
    normalize_y : bool, default=False
        Standardize targets before fitting and undo it at prediction.
    """

    def __init__(self, kernel="rbf", lengthscale=1.0, jitter=JITTER_START,
                 lengthscale_grid=None, normalize_y=False):
        self.kernel = kernel
        self.lengthscale = lengthscale
        self.jitter = jitter
        self.lengthscale_grid = lengthscale_grid
        self.normalize_y = normalize_y

    def _spec(self):
        if isinstance(self.kernel, KernelSpec):
            return self.kernel
        return KernelSpec.base(self.kernel, self.lengthscale)

    def fit(self, X, y):
        X = check_points(X)
        y = np.asarray(y, dtype=np.float64).ravel()
        if self.normalize_y:
            self.y_mean_ = float(y.mean())
            std = float(y.std())
            self.y_std_ = std if std > 1e-12 else 1.0
        else:
            self.y_mean_, self.y_std_ = 0.0, 1.0
        yn = (y - self.y_mean_) / self.y_std_
        spec = self._spec()
        outputscale = 1.0
        if self.lengthscale_grid is not None:
            if spec.form != "base":
                raise InputError("lengthscale_grid only supports base kernels")
            ls, outputscale, _ = select_lengthscale(X, yn, spec.kinds[0],
                                                    self.lengthscale_grid, self.jitter)
            spec = spec.with_lengthscale(ls)
        self.posterior_ = fit_posterior(X, yn, spec, self.jitter, outputscale)
        self.kernel_ = spec
        self.n_features_in_ = X.shape[1]
        return self

    def predict(self, X, return_std=False):
        check_is_fitted(self, "posterior_")
        mean, var = self.posterior_.predict(X)
        mean = mean * self.y_std_ + self.y_mean_
        if return_std:
            return mean, np.sqrt(var) * self.y_std_
        return mean

    def sample_y(self, X, random_state=0):
        check_is_fitted(self, "posterior_")
        draw = posterior_sample_batch(self.posterior_, X, random_state)
        return draw * self.y_std_ + self.y_mean_

    def log_marginal_likelihood(self):
        check_is_fitted(self, "posterior_")
        return log_marginal_likelihood(self.posterior_)
