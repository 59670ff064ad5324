import numpy as np

from utils.numeric_utils import central_difference

from .errors import CapabilityError, check_finite

class BaseField(object):
    """
    Scalar field f(q) on the base chart. gradient/hessian are optional;
    central differences are used in their place unless disabled.
    """
    def __init__(self, value, gradient=None, hessian=None, name='f', allow_fd=True):
        self._value = value
        self._gradient = gradient
        self._hessian = hessian
        self.name = name
        self.allow_fd = allow_fd

    @property
    def has_gradient(self):
        return self._gradient is not None

    def __call__(self, q):
        return float(self._value(np.asarray(q, dtype=float)))

    def gradient(self, q):
        q = np.asarray(q, dtype=float)
        if self._gradient is not None:
            return check_finite(np.asarray(self._gradient(q), dtype=float).reshape(len(q)), self.name)
        if not self.allow_fd:
            raise CapabilityError("No gradient for field '{}' and finite differences are disabled.".format(self.name))
        return check_finite(central_difference(self._value, q), self.name)

    def hessian(self, q):
        q = np.asarray(q, dtype=float)
        if self._hessian is not None:
            return np.asarray(self._hessian(q), dtype=float).reshape(len(q), len(q))
        if not self.allow_fd:
            raise CapabilityError("No hessian for field '{}' and finite differences are disabled.".format(self.name))
        H = central_difference(self.gradient, q)
        return 0.5 * (H + H.T)

    def __add__(self, other):
        return BaseField(lambda q: self(q) + other(q),
                         lambda q: self.gradient(q) + other.gradient(q),
                         lambda q: self.hessian(q) + other.hessian(q),
                         name='{}+{}'.format(self.name, other.name),
                         allow_fd=self.allow_fd and other.allow_fd)

    def __repr__(self):
        return "BaseField({})".format(self.name)

def zero_field(base_dim, name='0'):
    return BaseField(lambda q: 0.,
                     lambda q: np.zeros(base_dim),
                     lambda q: np.zeros((base_dim, base_dim)),
                     name=name)

def constant_field(base_dim, value, name=None):
    return BaseField(lambda q: value,
                     lambda q: np.zeros(base_dim),
                     lambda q: np.zeros((base_dim, base_dim)),
                     name=name or repr(value))

class CovectorField(object):
    """Section theta = theta_alpha e^alpha of A*, with optional base jacobian [beta, i]."""
    def __init__(self, components, jacobian=None, name='theta', allow_fd=True):
        self._components = components
        self._jacobian = jacobian
        self.name = name
        self.allow_fd = allow_fd

    def __call__(self, q):
        return np.asarray(self._components(np.asarray(q, dtype=float)), dtype=float)

    def jacobian(self, q):
        q = np.asarray(q, dtype=float)
        if self._jacobian is not None:
            return np.asarray(self._jacobian(q), dtype=float)
        if not self.allow_fd:
            raise CapabilityError("No jacobian for section '{}' and finite differences are disabled.".format(self.name))
        return check_finite(central_difference(self._components, q), self.name)
