"""Input validation helpers shared by the estimators and functional APIs."""

import numpy as np
from sklearn.utils.validation import check_array

from zeroshotopt.exceptions import InputError

BOX_TOL = 1e-12


def check_points(X, n_features=None, name="X"):
    """Return ``X`` as a 2-D float64 array, optionally checking its width."""
    try:
        X = check_array(np.asarray(X, dtype=float), ensure_2d=True, dtype=np.float64)
    except ValueError as exc:
        raise InputError(f"{name}: {exc}") from exc
    if n_features is not None and X.shape[1] != n_features:
        raise InputError(
            f"{name} has {X.shape[1]} features, expected {n_features}"
        )
    return X


def check_unit_box(X, n_features=None, name="X"):
    """Validate that every row of ``X`` lies in the unit box ``[0, 1]^d``."""
    X = check_points(X, n_features, name)
    if np.any(X < -BOX_TOL) or np.any(X > 1.0 + BOX_TOL):
        raise InputError(f"{name} has coordinates outside [0, 1]")
    return np.clip(X, 0.0, 1.0)


def check_vector(x, n_features=None, name="x"):
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1:
        raise InputError(f"{name} must be a 1-D vector, got shape {x.shape}")
    if n_features is not None and x.shape[0] != n_features:
        raise InputError(f"{name} has length {x.shape[0]}, expected {n_features}")
    if not np.all(np.isfinite(x)):
        raise InputError(f"{name} contains non-finite values")
    return x


def check_seed(seed):
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)
