"""Estimator-style front end: fit on trajectories, then minimize new objectives."""

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from zeroshotopt.exceptions import InputError
from zeroshotopt.policy import OptimizeConfig, optimize
from zeroshotopt.seqmodel.checkpoint import load_checkpoint, save_checkpoint
from zeroshotopt.seqmodel.model import ModelConfig
from zeroshotopt.seqmodel.training import TrainConfig, model_from_checkpoint, train
from zeroshotopt.trajectories import TrajectoryRecord


class ZeroShotOptimizer(BaseEstimator):
    """Regret-conditioned sequence-model optimizer.

    Parameters
    ----------
    model_config : dict, optional
        Overrides for :class:`ModelConfig`.
    train_config : dict, optional
        Overrides for :class:`TrainConfig`.
    budget, init_count, candidates, top_p, scaling
        Inference settings, see :class:`OptimizeConfig`.
    random_state : int
        Seed for training and inference.

    Examples
    --------
    >>> opt = ZeroShotOptimizer(train_config={"total_iterations": 10})  # doctest: +SKIP
    >>> opt.fit(records).minimize(f, dimension=2)  # doctest: +SKIP
    """

    def __init__(self, model_config=None, train_config=None, budget=50, init_count=10,
                 candidates=4, top_p=0.9, scaling="scaled_high", random_state=0):
        self.model_config = model_config
        self.train_config = train_config
        self.budget = budget
        self.init_count = init_count
        self.candidates = candidates
        self.top_p = top_p
        self.scaling = scaling
        self.random_state = random_state

    def fit(self, X, y=None):
        """Train on a sequence of :class:`TrajectoryRecord`; ``y`` is ignored."""
        records = list(X)
        if not records or not all(isinstance(r, TrajectoryRecord) for r in records):
            raise InputError("fit expects a non-empty sequence of TrajectoryRecord")
        model_cfg = ModelConfig(**(self.model_config or {}))
        train_cfg = TrainConfig(**{"seed": self.random_state, **(self.train_config or {})})
        self.checkpoint_ = train(records, model_cfg, train_cfg)
        self.model_ = model_from_checkpoint(self.checkpoint_)
        self.n_iter_ = self.checkpoint_.step
        return self

    def _optimize_config(self):
        return OptimizeConfig(budget=self.budget, init_count=self.init_count,
                              candidates=self.candidates, top_p=self.top_p,
                              scaling=self.scaling, seed=self.random_state)

    def minimize(self, objective, dimension, init_points=None):
        """Run ``budget`` evaluations of ``objective`` on [0, 1]^dimension; returns a History."""
        check_is_fitted(self, "model_")
        self.history_ = optimize(self.model_, objective, int(dimension),
                                 self._optimize_config(), init_points)
        return self.history_

    def predict(self, objective, dimension, init_points=None):
        """Best point found by :meth:`minimize`."""
        x, _ = self.minimize(objective, dimension, init_points).best()
        return np.asarray(x)

    def save(self, path):
        check_is_fitted(self, "checkpoint_")
        save_checkpoint(self.checkpoint_, path)

    @classmethod
    def load(cls, path, **params):
        ckpt = load_checkpoint(path)
        est = cls(model_config=ckpt.model_config, **params)
        est.checkpoint_ = ckpt
        est.model_ = model_from_checkpoint(ckpt)
        est.n_iter_ = ckpt.step
        return est
