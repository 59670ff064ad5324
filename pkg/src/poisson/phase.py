from collections import namedtuple

import numpy as np

from algebroid.errors import ModelError, NumericError, OutOfChartError, check_finite
from utils.numeric_utils import central_difference, matches_reference, make_rng

GRADIENT_CHECK_RTOL = 1e-4
NB_GRADIENT_CHECKS = 5
CHECK_SEED = 0

PhasePoint = namedtuple('PhasePoint', ['q', 'p'])

def phase_point(alg, q, p):
    """Validated point of A* in chart coordinates (q^i, p_alpha)."""
    q = alg.chart.check(q)
    p = np.asarray(p, dtype=float).reshape(-1)
    if len(p) != alg.rank:
        raise ModelError("Fiber point has {} components, algebroid rank is {}.".format(len(p), alg.rank))
    check_finite(p, 'fiber coordinates')
    return PhasePoint(q, p)

def chart_check_points(alg, n, seed=CHECK_SEED):
    rng = make_rng(seed)
    qs = alg.chart.sample(rng, n) if alg.base_dim else np.zeros((n, 0))
    return [PhasePoint(q, rng.uniform(-1., 1., alg.rank)) for q in qs]

def nearby_check_points(q, p, n, seed=CHECK_SEED):
    rng = make_rng(seed)
    q = np.asarray(q, dtype=float)
    p = np.asarray(p, dtype=float)
    return [PhasePoint(q + 1e-2 * (1. + np.abs(q)) * rng.uniform(-1., 1., len(q)), p + rng.uniform(-1., 1., len(p)))
            for _ in range(n)]

def to_array(x):
    return np.concatenate([x.q, x.p])

def from_array(alg, y):
    m = alg.base_dim
    return PhasePoint(y[:m], y[m:])

class ScalarPhaseField(object):
    """
    F(q, p) on A*. gradient(q, p) returns the (m + n,) array (dF/dq, dF/dp),
    hessian(q, p) the (m + n, m + n) array; both fall back to central differences.

    A supplied gradient is checked against central differences at 5 seeded
    random points: drawn from the chart of alg when given, else around the
    first point where the gradient is asked for. Explicit points replace them.
    """
    def __init__(self, value, gradient=None, hessian=None, name='F', alg=None, points=None):
        self._value = value
        self._gradient = gradient
        self._hessian = hessian
        self.name = name
        self._unchecked = gradient is not None
        if self._unchecked and points is None and alg is not None:
            points = chart_check_points(alg, NB_GRADIENT_CHECKS)
        if self._unchecked and points is not None:
            self.check_gradient(points)

    def __call__(self, q, p):
        return float(self._value(q, p))

    def _value_flat(self, m):
        return lambda y: self._value(y[:m], y[m:])

    def gradient(self, q, p):
        if self._unchecked:
            self.check_gradient(nearby_check_points(q, p, NB_GRADIENT_CHECKS))
        if self._gradient is not None:
            return check_finite(np.asarray(self._gradient(q, p), dtype=float), self.name)
        y = np.concatenate([q, p])
        return check_finite(central_difference(self._value_flat(len(q)), y), self.name)

    def derivatives(self, q, p):
        return self.gradient(q, p), self.hessian(q, p)

    def hessian(self, q, p):
        if self._hessian is not None:
            return np.asarray(self._hessian(q, p), dtype=float)
        m = len(q)
        y = np.concatenate([q, p])
        H = central_difference(lambda z: self.gradient(z[:m], z[m:]), y)
        return check_finite(0.5 * (H + H.T), self.name)

    def check_gradient(self, points):
        self._unchecked = False
        for x in points:
            y = np.concatenate([x.q, x.p])
            try:
                with np.errstate(all='ignore'):
                    reference = central_difference(self._value_flat(len(x.q)), y)
            except OutOfChartError:
                continue
            if not np.all(np.isfinite(reference)):
                continue
            if not matches_reference(self.gradient(x.q, x.p), reference, GRADIENT_CHECK_RTOL):
                raise NumericError("Supplied gradient of '{}' disagrees with finite differences at q={}, p={}.".format(
                    self.name, x.q.tolist(), x.p.tolist()))

    def __mul__(self, other):
        return ScalarPhaseField(lambda q, p: self(q, p) * other(q, p),
                                lambda q, p: self(q, p) * other.gradient(q, p) + other(q, p) * self.gradient(q, p),
                                name='{}*{}'.format(self.name, other.name))

    def __repr__(self):
        return "ScalarPhaseField({})".format(self.name)

def coordinate_field(alg, index, name=None):
    """The coordinate function x^index on A*, x = (q, p)."""
    size = alg.base_dim + alg.rank
    grad = np.zeros(size)
    grad[index] = 1.
    grad.setflags(write=False)
    return ScalarPhaseField(lambda q, p: np.concatenate([q, p])[index],
                            lambda q, p: grad,
                            lambda q, p: np.zeros((size, size)),
                            name=name or 'x{}'.format(index))

def quadratic_field(A, b, c=0., name='quad'):
    """F(x) = 1/2 x.A.x + b.x + c with symmetric A."""
    A = np.asarray(A, dtype=float)
    A = 0.5 * (A + A.T)
    b = np.asarray(b, dtype=float)

    def value(q, p):
        y = np.concatenate([q, p])
        return 0.5 * y.dot(A).dot(y) + b.dot(y) + c

    def gradient(q, p):
        y = np.concatenate([q, p])
        return A.dot(y) + b

    return ScalarPhaseField(value, gradient, lambda q, p: A, name=name)
