import numpy as np

from algebroid.errors import PreconditionError, check_finite
from modular.modular_section import modular_section
from modular.volumes import metric_fiber_density

CONSISTENCY_TOL = 1e-8

def zero_section_obstruction(alg, mech, vol, density, cert_sigma, q):
    """
    R_mu = G^{mu a} M_a - dV/dq^i rho^i_a (d^2 sigma~/dp_a dp_mu)|_{p=0}

    with M the modular section of (exp(sigma) nu, Lambda^G). R = 0 at every q
    is necessary for exp(sigma~) nu ^ Lambda^G to be preserved by X_H.
    """
    q = alg.chart.check(q)
    m, n = alg.base_dim, alg.rank

    sigma_value = density.zero_section_value(q, n)
    if abs(sigma_value - cert_sigma(q)) > CONSISTENCY_TOL:
        raise PreconditionError("sigma~ on the zero section ({:.12g}) differs from sigma(q) = {:.12g} at q = {}.".format(
            sigma_value, cert_sigma(q), q.tolist()))

    shifted = vol.shifted(base_shift=cert_sigma).with_fiber(metric_fiber_density(mech, m))
    M = modular_section(alg, shifted, q).components
    R = mech.cometric(q).dot(M)
    if m:
        dV = alg.anchor(q).T.dot(mech.potential.gradient(q))
        R = R - dV.dot(density.fiber_hessian(q, n))
    return check_finite(R, 'zero-section obstruction')
