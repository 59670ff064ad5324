import numpy as np

from .errors import check_finite

def anchor_compat_residual(alg, q):
    """
    R[i, a, b] = rho^j_a d rho^i_b/dq^j - rho^j_b d rho^i_a/dq^j - rho^i_g C^g_ab.
    Vanishes identically when rho is a bracket homomorphism.
    """
    q = alg.chart.check(q)
    rho = alg.anchor(q)
    D = alg.anchor_derivative(q)
    C = alg.structure(q)

    lie = np.einsum('ja,ibj->iab', rho, D)
    R = lie - np.transpose(lie, (0, 2, 1)) - np.einsum('ig,gab->iab', rho, C)
    return check_finite(R, 'anchor residual')

def jacobi_residual(alg, q):
    """
    J[v, a, b, c] = sum over cyclic (a, b, c) of rho^i_a dC^v_bc/dq^i + C^v_am C^m_bc.
    """
    q = alg.chart.check(q)
    rho = alg.anchor(q)
    C = alg.structure(q)
    dC = alg.structure_derivative(q)

    T = np.einsum('ia,vbci->vabc', rho, dC) + np.einsum('vam,mbc->vabc', C, C)
    J = T + np.einsum('vbca->vabc', T) + np.einsum('vcab->vabc', T)
    return check_finite(J, 'jacobi residual')

def max_structure_residuals(alg, points):
    """Max-norm of both structure residuals over a set of base points."""
    max_anchor, max_jacobi = 0., 0.
    for q in points:
        R = anchor_compat_residual(alg, q)
        J = jacobi_residual(alg, q)
        if R.size:
            max_anchor = max(max_anchor, float(np.max(np.abs(R))))
        if J.size:
            max_jacobi = max(max_jacobi, float(np.max(np.abs(J))))
    return max_anchor, max_jacobi
