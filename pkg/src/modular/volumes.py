import numpy as np

from algebroid.fields import BaseField, zero_field
from algebroid.errors import ModelError
from poisson.phase import ScalarPhaseField

HESSIAN_STEP = 1e-4

class VolumeSpec(object):
    """
    Chart densities of nu = exp(sigma_nu) dq^1...dq^m and
    Lambda = exp(lambda) e_1...e_n, both as log-density BaseFields.
    """
    def __init__(self, base_dim, base_log_density=None, fiber_log_density=None):
        self.base_dim = base_dim
        if base_dim == 0 and base_log_density is not None:
            raise ModelError("A zero-dimensional base carries no base density.")
        self.base_log_density = base_log_density or zero_field(base_dim, 'sigma_nu')
        self.fiber_log_density = fiber_log_density or zero_field(base_dim, 'lambda')

    def with_fiber(self, fiber_log_density):
        base = self.base_log_density if self.base_dim else None
        return VolumeSpec(self.base_dim, base, fiber_log_density)

    def shifted(self, base_shift=None, fiber_shift=None):
        """Volume e^{base_shift} nu with fiber e^{fiber_shift} Lambda."""
        base = self.base_log_density if base_shift is None else self.base_log_density + base_shift
        fiber = self.fiber_log_density if fiber_shift is None else self.fiber_log_density + fiber_shift
        return VolumeSpec(self.base_dim, base if self.base_dim else None, fiber)

    def total_log_density(self, q):
        return self.base_log_density(q) + self.fiber_log_density(q)

    def total_gradient(self, q):
        if self.base_dim == 0:
            return np.zeros(0)
        return self.base_log_density.gradient(q) + self.fiber_log_density.gradient(q)

    def __repr__(self):
        return "VolumeSpec(nu={}, Lambda={})".format(self.base_log_density.name, self.fiber_log_density.name)

class PhaseDensity(object):
    """
    Phase-space factor sigma~(q, p) of Phi = exp(sigma~) nu ^ Lambda.
    fiber_hessian(q) returns d^2 sigma~/dp_a dp_b at p = 0; central differences otherwise.
    """
    def __init__(self, sigma_tilde, fiber_hessian=None, scale=1., basic=False):
        self.sigma_tilde = sigma_tilde
        self._fiber_hessian = fiber_hessian
        self.scale = scale
        self.basic = basic

    def zero_section_value(self, q, rank):
        return self.sigma_tilde(q, np.zeros(rank))

    def fiber_hessian(self, q, rank):
        if self._fiber_hessian is not None:
            return np.asarray(self._fiber_hessian(q), dtype=float)
        if self.basic:
            return np.zeros((rank, rank))
        h = HESSIAN_STEP * (1. + abs(self.scale))
        m = len(q)
        H = np.zeros((rank, rank))
        for a in range(rank):
            e = np.zeros(rank)
            e[a] = h
            H[a] = (self.sigma_tilde.gradient(q, e)[m:] - self.sigma_tilde.gradient(q, -e)[m:]) / (2 * h)
        return 0.5 * (H + H.T)

def basic_density(alg, sigma):
    """sigma~ = sigma o tau for a BaseField sigma."""
    m, n = alg.base_dim, alg.rank

    def gradient(q, p):
        g = sigma.gradient(q) if m else np.zeros(0)
        return np.concatenate([g, np.zeros(n)])

    def hessian(q, p):
        H = np.zeros((m + n, m + n))
        if m:
            H[:m, :m] = sigma.hessian(q)
        return H

    field = ScalarPhaseField(lambda q, p: sigma(q), gradient, hessian, name='{}o tau'.format(sigma.name), alg=alg)
    return PhaseDensity(field, fiber_hessian=lambda q: np.zeros((n, n)), basic=True)

def zero_density(alg):
    return basic_density(alg, zero_field(alg.base_dim, '0'))

class UnimodularityCertificate(object):
    """Candidate sigma with M^(nu, Lambda) = -d^A sigma; checked by verify_certificate."""
    def __init__(self, sigma, claimed=True):
        self.sigma = sigma
        self.claimed = claimed

    def __repr__(self):
        return "UnimodularityCertificate(sigma={}, claimed={})".format(self.sigma.name, self.claimed)

def metric_lambda_log_density(mech, q):
    """lambda(q) = 1/2 log det G^{ab}(q), the fiber log-density of Lambda^G."""
    G = mech.cometric(q)
    sign, logdet = np.linalg.slogdet(G)
    if sign <= 0:
        raise ModelError("Cometric determinant is not positive at q = {}.".format(np.asarray(q).tolist()))
    return 0.5 * logdet

def metric_fiber_density(mech, base_dim):
    """Lambda^G as a BaseField; gradient 1/2 tr(G^-1 dG/dq)."""
    def gradient(q):
        if mech.constant_cometric:
            return np.zeros(base_dim)
        G = mech.cometric(q)
        dG = mech.cometric_derivative(q)
        return 0.5 * np.einsum('ab,baj->j', np.linalg.inv(G), dG)

    return BaseField(lambda q: metric_lambda_log_density(mech, q), gradient, name='lambda_G')
