"""Name-based registry of optimizers sharing the ``runner(objective, init, steps, seed)`` shape."""

from functools import partial

from zeroshotopt.baselines.bo import ACQUISITIONS, SURROGATE_KERNELS, BoVariant, run_bo
from zeroshotopt.baselines.evolution import RUNNERS
from zeroshotopt.exceptions import InputError

MODEL_PREFIX = "model:"


def _bo_runner(variant, objective, init_points, steps, seed):
    return run_bo(objective, variant, init_points, steps, seed)


class ModelRunner:
    """Picklable runner around a checkpoint path; the model loads lazily per process."""

    def __init__(self, path, **options):
        self.path = path
        self.options = options
        self._model = None

    def __getstate__(self):
        return {"path": self.path, "options": self.options, "_model": None}

    def __call__(self, objective, init_points, steps, seed):
        from zeroshotopt.policy import OptimizeConfig, optimize
        from zeroshotopt.seqmodel.checkpoint import load_checkpoint
        from zeroshotopt.seqmodel.training import model_from_checkpoint

        if self._model is None:
            self._model = model_from_checkpoint(load_checkpoint(self.path))
        m, d = init_points.shape
        config = OptimizeConfig(budget=m + steps, init_count=m, seed=int(seed), **self.options)
        return optimize(self._model, objective, d, config, init_points)


def available_methods():
    names = [f"{a}-{k}" for a in ACQUISITIONS for k in SURROGATE_KERNELS]
    return names + list(RUNNERS) + [f"{MODEL_PREFIX}<checkpoint>"]


def resolve_method(name, **model_options):
    """Return a runner for ``name``: a BO variant, a population baseline or ``model:<path>``."""
    if name.startswith(MODEL_PREFIX):
        return ModelRunner(name[len(MODEL_PREFIX):], **model_options)
    if name in RUNNERS:
        return RUNNERS[name]
    acq, _, kernel = name.partition("-")
    if acq in ACQUISITIONS and kernel in SURROGATE_KERNELS:
        return partial(_bo_runner, BoVariant(acq, kernel))
    raise InputError(f"unknown method {name!r}; available: {', '.join(available_methods())}")
