from collections import namedtuple

import numpy as np

from algebroid.errors import check_finite
from poisson.bivector import hamiltonian_vector_field, coordinate_divergence
from modular.modular_section import modular_section

DivergenceReport = namedtuple('DivergenceReport', ['point', 'divergence', 'density_breakdown'])

def divergence(alg, H, vol, density, x):
    """
    Divergence of X_H with respect to Phi = exp(sigma~) nu ^ Lambda, i.e.
    sum_k dX^k/dx^k + X_H(sigma~ + sigma_nu + lambda) in chart coordinates.
    """
    m = alg.base_dim
    coordinate = coordinate_divergence(alg, H, x)

    X = hamiltonian_vector_field(alg, H, x)
    grad = np.array(density.sigma_tilde.gradient(x.q, x.p), dtype=float)
    if m:
        grad[:m] += vol.total_gradient(x.q)
    advection = float(X.dot(check_finite(grad, 'log-density gradient')))

    return DivergenceReport(x, coordinate + advection, (coordinate, advection))

def modular_vector_field_value(alg, vol, x):
    """Vertical lift of the modular section: 0 on the q-slots, M(q) on the p-slots."""
    M = modular_section(alg, vol, x.q).components
    return np.concatenate([np.zeros(alg.base_dim), M])

def vertical_derivative(density, x):
    """Fiber derivative d sigma~/dp at x."""
    m = len(x.q)
    return density.sigma_tilde.gradient(x.q, x.p)[m:]
