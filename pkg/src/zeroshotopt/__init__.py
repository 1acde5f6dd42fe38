"""Zero-shot black-box optimization with a regret-conditioned sequence model."""

from zeroshotopt.exceptions import FormatError, InputError, NumericalError
from zeroshotopt.gp import GaussianProcess, GpPosterior, KernelSpec

__version__ = "0.1.0"

__all__ = [
    "BayesianOptimizer",
    "FormatError",
    "GaussianProcess",
    "GpPosterior",
    "InputError",
    "KernelSpec",
    "NumericalError",
    "ZeroShotOptimizer",
    "__version__",
]

_LAZY = {
    "ZeroShotOptimizer": "zeroshotopt.estimator",
    "BayesianOptimizer": "zeroshotopt.baselines.bo",
}


def __getattr__(name):
    # torch-backed estimators load on first use
    if name in _LAZY:
        import importlib

        return getattr(importlib.import_module(_LAZY[name]), name)
    raise AttributeError(f"module 'zeroshotopt' has no attribute {name!r}")
