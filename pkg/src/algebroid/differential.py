import numpy as np

from .algebroid import AlgebroidCovector
from .errors import check_finite

def differential_of_function(alg, f, q):
    """(d^A f)_a = rho^i_a df/dq^i."""
    q = alg.chart.check(q)
    rho = alg.anchor(q)
    grad = f.gradient(q) if alg.base_dim else np.zeros(0)
    return AlgebroidCovector(q, check_finite(rho.T.dot(grad), 'd^A f'))

def differential_of_section(alg, theta, q):
    """
    (d^A theta)_ab = rho^i_a d theta_b/dq^i - rho^i_b d theta_a/dq^i - C^g_ab theta_g.
    theta is a CovectorField; returns the antisymmetric (n, n) matrix.
    """
    q = alg.chart.check(q)
    rho = alg.anchor(q)
    C = alg.structure(q)
    components = np.asarray(theta(q), dtype=float)
    if alg.base_dim:
        K = np.einsum('ia,bi->ab', rho, theta.jacobian(q))
    else:
        K = np.zeros((alg.rank, alg.rank))

    out = K - K.T - np.einsum('gab,g->ab', C, components)
    return check_finite(out, 'd^A theta')
