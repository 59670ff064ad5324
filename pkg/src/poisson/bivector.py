"""
Linear Poisson structure on A* and Hamiltonian vector fields.

Sign convention: {X^, Y^} = -[[X, Y]]^, hence {p_a, p_b} = -C^g_ab p_g.
Much of the literature uses the opposite sign; every built-in model and test
in this repo uses this one.
"""
import numpy as np

from algebroid.errors import check_finite

from .phase import PhasePoint

def poisson_bivector(alg, x):
    """
    Pi[q_i, p_a] = rho^i_a, Pi[p_a, q_i] = -rho^i_a,
    Pi[p_a, p_b] = -C^g_ab p_g, Pi[q_i, q_j] = 0.
    """
    m, n = alg.base_dim, alg.rank
    rho = alg.anchor(x.q)
    C = alg.structure(x.q)

    B = -np.einsum('gab,g->ab', C, x.p)
    B = 0.5 * (B - B.T)

    Pi = np.zeros((m + n, m + n))
    Pi[:m, m:] = rho
    Pi[m:, :m] = -rho.T
    Pi[m:, m:] = B
    return Pi

def _antisymmetric_pairing(Pi, a, b):
    # sum over i < j of Pi_ij (a_i b_j - a_j b_i); swapping a and b negates every term exactly
    i, j = np.triu_indices(len(a), 1)
    return float(np.sum(Pi[i, j] * (a[i] * b[j] - a[j] * b[i])))

def poisson_bracket(alg, F, G, x):
    Pi = poisson_bivector(alg, x)
    dF = F.gradient(x.q, x.p)
    dG = G.gradient(x.q, x.p)
    return _antisymmetric_pairing(Pi, dF, dG)

def _field(rho, C, grad, p):
    m = rho.shape[0]
    dHq, dHp = grad[:m], grad[m:]
    Cp = np.tensordot(p, C, axes=1)
    return np.concatenate([rho.dot(dHp), -(rho.T.dot(dHq) + Cp.dot(dHp))])

def _jacobian(rho, C, D, dC, grad, hess, p):
    m, n = rho.shape
    Hq, Hp = grad[:m], grad[m:]
    Hqq, Hqp, Hpp = hess[:m, :m], hess[:m, m:], hess[m:, m:]
    Cp = np.tensordot(p, C, axes=1)

    J = np.empty((m + n, m + n))
    # qdot^i = rho^i_a Hp_a
    J[:m, :m] = rho.dot(Hqp.T)
    J[:m, m:] = rho.dot(Hpp)
    # pdot_a = -(Hq_i rho^i_a + Hp_b C^g_ab p_g)
    J[m:, :m] = -(rho.T.dot(Hqq) + Cp.dot(Hqp.T))
    J[m:, m:] = -(rho.T.dot(Hqp) + Cp.dot(Hpp) + np.tensordot(C, Hp, axes=([2], [0])).T)
    if D is not None and m:
        J[:m, :m] += np.tensordot(Hp, D, axes=([0], [1]))
        J[m:, :m] -= np.tensordot(Hq, D, axes=([0], [0])) + np.tensordot(Hp, np.tensordot(p, dC, axes=1), axes=([0], [1]))
    return J

def vector_field_from_gradient(alg, x, grad):
    """X_H from dH = grad at x; equals Pi(x) . grad."""
    return check_finite(_field(alg.anchor(x.q), alg.structure(x.q), grad, x.p), 'hamiltonian vector field')

def hamiltonian_vector_field(alg, H, x):
    return vector_field_from_gradient(alg, x, H.gradient(x.q, x.p))

def hamiltonian_jacobian(alg, H, x):
    """
    dX_H/dx at x, assembled from the phase-space Hessian of H and the model
    derivatives of rho and C. H is a ScalarPhaseField or a MechanicalHamiltonian.
    """
    rho, C, D, dC = alg.local_data(x.q)
    grad, hess = H.derivatives(x.q, x.p)
    return check_finite(_jacobian(rho, C, D, dC, grad, hess, x.p), 'jacobian of X_H')

def coordinate_divergence(alg, H, x):
    return float(np.trace(hamiltonian_jacobian(alg, H, x)))

class HamiltonianFlow(object):
    """
    X_H and dX_H/dx for one (algebroid, H) pair along a trajectory. Model data
    of a constant algebroid are read at the first point and reused; every
    evaluation still checks the chart once.
    """
    def __init__(self, alg, H):
        self.alg = alg
        self.H = H
        self._frozen = None

    def local_data(self, q):
        if self._frozen is not None:
            if self.alg.base_dim:
                self.alg.chart.check(q)
            return self._frozen
        rho, C, D, dC = self.alg.local_data(q)
        if self.alg.constant or self.alg.base_dim == 0:
            self._frozen = (rho, C, None, None)
        return rho, C, D, dC

    def vector_field(self, x):
        rho, C, _, _ = self.local_data(x.q)
        return check_finite(_field(rho, C, self.H.gradient(x.q, x.p), x.p), 'hamiltonian vector field')

    def field_and_jacobian(self, x):
        rho, C, D, dC = self.local_data(x.q)
        grad, hess = self.H.derivatives(x.q, x.p)
        X = check_finite(_field(rho, C, grad, x.p), 'hamiltonian vector field')
        J = check_finite(_jacobian(rho, C, D, dC, grad, hess, x.p), 'jacobian of X_H')
        return X, J

    def rhs(self):
        """x' = X_H(x) on flat arrays (q, p)."""
        m = self.alg.base_dim
        return lambda y: self.vector_field(PhasePoint(y[:m], y[m:]))
