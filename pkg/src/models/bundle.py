import logging

import numpy as np

from algebroid.errors import ModelError
from algebroid.structure import max_structure_residuals
from poisson.phase import phase_point
from modular.modular_section import basic_density_for

ANALYTIC_TOL = 1e-8
FD_TOL = 1e-5
NB_VALIDATION_POINTS = 100

class ModelBundle(object):
    """
    A ready-to-run system: algebroid, mechanical Hamiltonian, reference
    volume (nu, Lambda) and, when unimodularity is claimed, the certificate sigma.

    expected = {'unimodular': bool, 'casimirs': [ScalarPhaseField, ...]}
    """
    def __init__(self,
                 name,
                 algebroid,
                 hamiltonian,
                 volume,
                 certificate=None,
                 params=None,
                 expected=None,
                 card='',
                 default_x0=None,
                 validate=True):
        self.name = name
        self.algebroid = algebroid
        self.hamiltonian = hamiltonian
        self.volume = volume
        self.certificate = certificate
        self.params = dict(params or {})
        self.expected = {'unimodular': certificate is not None, 'casimirs': []}
        self.expected.update(expected or {})
        self.card = card

        m, n = algebroid.base_dim, algebroid.rank
        if default_x0 is None:
            q0 = algebroid.chart.grid(1)[0] if m else np.zeros(0)
            default_x0 = (q0, np.ones(n))
        self.default_x0 = phase_point(algebroid, *default_x0)

        self.residuals = self._validate() if validate else None

    def _validate(self):
        alg = self.algebroid
        points = alg.chart.grid(NB_VALIDATION_POINTS) if alg.base_dim else np.zeros((1, 0))
        max_anchor, max_jacobi = max_structure_residuals(alg, points)
        tol = ANALYTIC_TOL if alg.has_analytic_derivatives else FD_TOL
        if max(max_anchor, max_jacobi) >= tol:
            raise ModelError("Model '{}' fails the structure equations: anchor {:.3e}, jacobi {:.3e} (tol {:.0e}).".format(
                self.name, max_anchor, max_jacobi, tol))
        logging.debug("Model '%s' validated on %d points: anchor %.3e, jacobi %.3e",
                      self.name, len(points), max_anchor, max_jacobi)
        return max_anchor, max_jacobi

    @property
    def casimirs(self):
        return list(self.expected['casimirs'])

    def preserved_volume(self):
        """(VolumeSpec, PhaseDensity) of exp(sigma) nu ^ Lambda^G, or None without a certificate."""
        if self.certificate is None:
            return None
        return basic_density_for(self.algebroid, self.hamiltonian, self.volume, self.certificate)

    def describe(self):
        alg = self.algebroid
        return {
            'name': self.name,
            'base_dim': alg.base_dim,
            'rank': alg.rank,
            'coord_names': list(alg.chart.coord_names),
            'domain': [[_finite_or_none(lo), _finite_or_none(hi)] for lo, hi in alg.chart.domain],
            'params': self.params,
            'expected': {
                'unimodular': bool(self.expected['unimodular']),
                'casimirs': [c.name for c in self.casimirs],
            },
            'card': self.card,
        }

    def __repr__(self):
        return "ModelBundle({}, base_dim={}, rank={})".format(self.name, self.algebroid.base_dim, self.algebroid.rank)

def _finite_or_none(x):
    return float(x) if np.isfinite(x) else None
