import numpy as np

from algebroid.errors import ModelError, check_finite
from utils.numeric_utils import central_difference

from .phase import ScalarPhaseField
from .bivector import vector_field_from_gradient

SYMMETRY_TOL = 1e-12

class MechanicalHamiltonian(object):
    """
    H(q, p) = 1/2 p.G(q).p + V(q), with G^{ab}(q) the cometric (symmetric
    positive-definite) and V a BaseField. Fiber derivatives are analytic;
    base derivatives of G use cometric_jac (n, n, m) or central differences.
    A constant cometric is checked once and then reused.
    """
    def __init__(self,
                 cometric,
                 potential,
                 cometric_jac=None,
                 constant_cometric=False,
                 name='H'):
        self._cometric = cometric
        self._cometric_jac = cometric_jac
        self._frozen_cometric = None
        self.potential = potential
        self.constant_cometric = constant_cometric
        self.name = name

    def _checked_cometric(self, q):
        G = check_finite(np.asarray(self._cometric(q), dtype=float), 'cometric')
        if np.max(np.abs(G - G.T)) > SYMMETRY_TOL * max(1., np.max(np.abs(G))):
            raise ModelError("Cometric of '{}' is not symmetric at q = {}.".format(self.name, np.asarray(q).tolist()))
        try:
            np.linalg.cholesky(G)
        except np.linalg.LinAlgError:
            raise ModelError("Cometric of '{}' is not positive-definite at q = {}.".format(self.name, np.asarray(q).tolist()))
        return G

    def cometric(self, q):
        if self._frozen_cometric is not None:
            return self._frozen_cometric
        G = self._checked_cometric(q)
        if self.constant_cometric:
            G = G.copy()
            G.setflags(write=False)
            self._frozen_cometric = G
        return G

    def cometric_derivative(self, q):
        q = np.asarray(q, dtype=float)
        if self.constant_cometric or len(q) == 0:
            n = len(self.cometric(q))
            return np.zeros((n, n, len(q)))
        if self._cometric_jac is not None:
            return np.asarray(self._cometric_jac(q), dtype=float)
        return central_difference(lambda y: np.asarray(self._cometric(y), dtype=float), q)

    def __call__(self, q, p):
        G = self.cometric(q)
        return float(0.5 * p.dot(G).dot(p) + self.potential(q))

    def _gradient(self, q, p, G, dG):
        dHq = self.potential.gradient(q) if len(q) else np.zeros(0)
        if not self.constant_cometric and len(q):
            dHq = dHq + 0.5 * np.einsum('a,abj,b->j', p, dG, p)
        return np.concatenate([dHq, G.dot(p)])

    def _hessian(self, q, p, G, dG):
        m, n = len(q), len(p)
        if m == 0:
            return np.array(G)

        Hqq = self.potential.hessian(q)
        if self.constant_cometric:
            Hqp = np.zeros((m, n))
        else:
            d2G = central_difference(self.cometric_derivative, q)
            Hqq = Hqq + 0.5 * np.einsum('a,abij,b->ij', p, d2G, p)
            Hqq = 0.5 * (Hqq + Hqq.T)
            Hqp = np.einsum('abj,b->ja', dG, p)

        hess = np.zeros((m + n, m + n))
        hess[:m, :m] = Hqq
        hess[:m, m:] = Hqp
        hess[m:, :m] = Hqp.T
        hess[m:, m:] = G
        return hess

    def gradient(self, q, p):
        return self._gradient(q, p, self.cometric(q), self.cometric_derivative(q))

    def hessian(self, q, p):
        return self._hessian(q, p, self.cometric(q), self.cometric_derivative(q))

    def derivatives(self, q, p):
        """(gradient, hessian) sharing one evaluation of G and dG/dq."""
        G = self.cometric(q)
        dG = self.cometric_derivative(q)
        return self._gradient(q, p, G, dG), self._hessian(q, p, G, dG)

    def as_phase_field(self):
        return ScalarPhaseField(self.__call__, self.gradient, self.hessian, name=self.name)

    def __repr__(self):
        return "MechanicalHamiltonian({})".format(self.name)

def mechanical_rhs(alg, mech, x):
    return vector_field_from_gradient(alg, x, mech.gradient(x.q, x.p))
