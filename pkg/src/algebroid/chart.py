import numpy as np

from utils.numeric_utils import sample_box, halton_grid

from .errors import OutOfChartError, ModelError, NumericError

class BaseChart(object):
    """
    A single coordinate chart (q^1, ..., q^m) on the base manifold, with an
    axis-aligned domain box. Unbounded sides are given as +/- inf.
    """
    def __init__(self, coord_names, lower=None, upper=None):
        self.coord_names = tuple(coord_names)
        self.base_dim = len(self.coord_names)

        if lower is None:
            lower = [-np.inf] * self.base_dim
        if upper is None:
            upper = [np.inf] * self.base_dim
        self.lower = np.array(lower, dtype=float).reshape(-1)
        self.upper = np.array(upper, dtype=float).reshape(-1)

        if len(self.lower) != self.base_dim or len(self.upper) != self.base_dim:
            raise ModelError("Chart domain has {} lower / {} upper bounds for {} coordinates.".format(
                len(self.lower), len(self.upper), self.base_dim))
        if len(set(self.coord_names)) != self.base_dim:
            raise ModelError("Duplicate coordinate names: {}".format(self.coord_names))
        bounded = np.isfinite(self.lower) & np.isfinite(self.upper)
        if np.any(self.lower[bounded] >= self.upper[bounded]):
            raise ModelError("Chart domain needs lower < upper on every bounded axis.")

        self.lower.setflags(write=False)
        self.upper.setflags(write=False)

    @property
    def domain(self):
        return list(zip(self.lower.tolist(), self.upper.tolist()))

    def contains(self, q):
        q = np.asarray(q, dtype=float)
        return bool(q.shape == (self.base_dim,) and
                    np.all(q > self.lower) and np.all(q < self.upper))

    def check(self, q):
        q = np.asarray(q, dtype=float).reshape(-1)
        if len(q) != self.base_dim:
            raise OutOfChartError("Base point has {} coordinates, chart has {}.".format(len(q), self.base_dim))
        if not np.all(np.isfinite(q)):
            raise NumericError("Non-finite base point {}.".format(q))
        if not (np.all(q > self.lower) and np.all(q < self.upper)):
            raise OutOfChartError("Base point {} outside chart domain {}.".format(q.tolist(), self.domain))
        return q

    def sample(self, rng, n, margin=0.05):
        return sample_box(rng, self.lower, self.upper, n, margin)

    def grid(self, n, margin=0.05):
        return halton_grid(self.lower, self.upper, n, margin)

    def __repr__(self):
        return "BaseChart({}, {})".format(list(self.coord_names), self.domain)
