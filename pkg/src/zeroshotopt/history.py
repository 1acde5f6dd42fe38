from dataclasses import dataclass, field

import numpy as np

from zeroshotopt.exceptions import InputError


@dataclass
class History:
    """Ordered evaluations ``(points[i], values[i])`` of one optimization run."""

    points: np.ndarray
    values: np.ndarray
    info: list = field(default_factory=list)

    def __post_init__(self):
        self.points = np.atleast_2d(np.asarray(self.points, dtype=np.float64))
        self.values = np.asarray(self.values, dtype=np.float64).ravel()
        if self.points.shape[0] != self.values.shape[0]:
            raise InputError(
                f"{self.points.shape[0]} points but {self.values.shape[0]} values"
            )

    @classmethod
    def empty(cls, dimension):
        return cls(np.empty((0, dimension)), np.empty(0))

    def __len__(self):
        return self.values.shape[0]

    @property
    def dimension(self):
        return self.points.shape[1]

    def append(self, x, value, **info):
        self.points = np.vstack([self.points, np.asarray(x, dtype=np.float64)[None, :]])
        self.values = np.append(self.values, float(value))
        if info or self.info:
            self.info.extend([{}] * (len(self.values) - 1 - len(self.info)))
            self.info.append(info)

    def best_so_far(self):
        return np.minimum.accumulate(self.values)

    def best(self):
        i = int(np.argmin(self.values))
        return self.points[i], float(self.values[i])
