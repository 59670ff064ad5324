import logging

import numpy as np

from algebroid.algebroid import AlgebroidCovector
from algebroid.fields import CovectorField
from algebroid.differential import differential_of_function, differential_of_section
from algebroid.errors import PreconditionError, check_finite

from .volumes import basic_density, metric_fiber_density

ANALYTIC_THRESHOLD = 1e-6
FD_THRESHOLD = 1e-4
NB_RANDOM_SAMPLES = 100

def modular_section(alg, vol, q):
    """
    M_a = C^b_ab + d rho^i_a/dq^i + rho^i_a d sigma_nu/dq^i + (d^A lambda)_a
    """
    q = alg.chart.check(q)
    rho = alg.anchor(q)
    C = alg.structure(q)
    D = alg.anchor_derivative(q)

    M = np.einsum('bab->a', C) + np.einsum('iai->a', D)
    if alg.base_dim:
        M = M + rho.T.dot(vol.base_log_density.gradient(q) + vol.fiber_log_density.gradient(q))
    return AlgebroidCovector(q, check_finite(M, 'modular section'))

def modular_character(alg):
    """Trace of the adjoint action, a -> C^b_ab, for a Lie algebra (m = 0)."""
    if alg.base_dim != 0:
        raise PreconditionError("modular_character needs a zero-dimensional base; use modular_section.")
    C = alg.structure(np.zeros(0))
    return np.einsum('bab->a', C)

def modular_section_field(alg, vol):
    return CovectorField(lambda q: modular_section(alg, vol, q).components, name='M')

def modular_cocycle_residual(alg, vol, q):
    """d^A M^(nu, Lambda) at q; vanishes for a Lie algebroid."""
    return differential_of_section(alg, modular_section_field(alg, vol), q)

def unimodularity_residual(alg, vol, cert, q):
    """M^(nu, Lambda) + d^A sigma, zero everywhere iff sigma certifies unimodularity."""
    M = modular_section(alg, vol, q)
    dsigma = differential_of_function(alg, cert.sigma, q)
    return AlgebroidCovector(M.base_point, M.components + dsigma.components)

def action_volume_residual(alg, base_log_density, sigma, q):
    """
    For an action algebroid g x Q with constant frame e_a and anchor rho(e_a) = xi_Q:

        tr ad(e_a) + div_nu(rho(e_a)) + rho(e_a)(sigma)

    with nu = exp(sigma_nu) dq. Zero for every a exactly when exp(sigma) dp ^ nu
    is preserved by every kinetic-plus-potential flow.
    """
    q = alg.chart.check(q)
    if np.any(alg.structure_derivative(q)):
        raise PreconditionError("'{}' has non-constant structure functions; not an action algebroid.".format(alg.name))
    rho = alg.anchor(q)
    C = alg.structure(q)
    div = np.einsum('iai->a', alg.anchor_derivative(q))
    if alg.base_dim:
        div = div + rho.T.dot(base_log_density.gradient(q))
        generated = rho.T.dot(sigma.gradient(q))
    else:
        generated = np.zeros(alg.rank)
    return check_finite(np.einsum('bab->a', C) + div + generated, 'action volume residual')

def certificate_points(alg, rng, samples=NB_RANDOM_SAMPLES):
    m = alg.base_dim
    if m == 0:
        return np.zeros((1, 0))
    grid = alg.chart.grid(10 ** min(m, 3))
    return np.concatenate([grid, alg.chart.sample(rng, samples)])

def verify_certificate(alg, vol, cert, rng, samples=NB_RANDOM_SAMPLES, threshold=None):
    """
    Max-norm of the unimodularity residual over a Halton grid plus uniform
    random chart points. For m = 0 the check is exact (one point).
    Returns (max_residual, verified, threshold).
    """
    if threshold is None:
        exact = alg.has_analytic_derivatives and cert.sigma.has_gradient
        threshold = ANALYTIC_THRESHOLD if exact else FD_THRESHOLD

    max_residual = 0.
    for q in certificate_points(alg, rng, samples):
        r = unimodularity_residual(alg, vol, cert, q).components
        max_residual = max(max_residual, float(np.max(np.abs(r))))

    verified = max_residual < threshold
    if cert.claimed and not verified:
        logging.warning("Certificate '%s' for '%s' fails: max residual %.3e >= %.1e",
                        cert.sigma.name, alg.name, max_residual, threshold)
    return max_residual, verified, threshold

def basic_density_for(alg, mech, vol, cert):
    """
    The volume Phi = exp(sigma) nu ^ Lambda^G preserved by a mechanical flow
    when M^(nu, Lambda^G) = -d^A sigma, as a (VolumeSpec, PhaseDensity) pair.
    """
    volume = vol.with_fiber(metric_fiber_density(mech, alg.base_dim))
    return volume, basic_density(alg, cert.sigma)
