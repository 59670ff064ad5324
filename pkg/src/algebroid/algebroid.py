import logging
from collections import namedtuple

import numpy as np

from utils.numeric_utils import central_difference, make_rng

from .chart import BaseChart
from .errors import ModelError, check_finite

ANTISYMMETRY_TOL = 1e-12
NB_CHECK_POINTS = 10

AlgebroidCovector = namedtuple('AlgebroidCovector', ['base_point', 'components'])

#####################################################
#                  CHARTED ALGEBROID                #
#####################################################

class ChartedAlgebroid(object):
    """
    Lie algebroid A -> Q of rank n over a single chart of the m-dimensional base.

    anchor(q)    -> (m, n) array rho[i, alpha]
    structure(q) -> (n, n, n) array C[gamma, alpha, beta], antisymmetric in (alpha, beta)
    anchor_jac(q)    -> (m, n, m) array d rho[i, alpha] / d q^j   (optional)
    structure_jac(q) -> (n, n, n, m) array d C[gamma, alpha, beta] / d q^j   (optional)

    Missing jacobians are replaced by central differences.
    """
    def __init__(self,
                 chart,
                 rank,
                 anchor,
                 structure,
                 anchor_jac=None,
                 structure_jac=None,
                 name='algebroid',
                 constant=False,
                 check_seed=0):
        if not isinstance(chart, BaseChart):
            chart = BaseChart(chart)
        if int(rank) < 1:
            raise ModelError("Algebroid rank must be >= 1, got {}.".format(rank))
        self.chart = chart
        self.rank = int(rank)
        self.name = name
        self.constant = constant

        self._anchor = anchor
        self._structure = structure
        self._anchor_jac = anchor_jac
        self._structure_jac = structure_jac

        self._check_antisymmetry(make_rng(check_seed))

    @property
    def base_dim(self):
        return self.chart.base_dim

    @property
    def has_analytic_derivatives(self):
        if self.base_dim == 0 or self.constant:
            return True
        return self._anchor_jac is not None and self._structure_jac is not None

    def _check_antisymmetry(self, rng):
        points = self.chart.sample(rng, NB_CHECK_POINTS)
        for q in points:
            C = self._raw_structure(q)
            asym = np.max(np.abs(C + np.transpose(C, (0, 2, 1)))) if C.size else 0.
            if asym > ANTISYMMETRY_TOL * max(1., np.max(np.abs(C))):
                raise ModelError("Structure functions of '{}' are not antisymmetric at q = {} (|C + C^T| = {:.3e}).".format(
                    self.name, q.tolist(), asym))
        logging.debug("Antisymmetry of '%s' checked at %d points", self.name, NB_CHECK_POINTS)

    def _raw_anchor(self, q):
        m, n = self.base_dim, self.rank
        if m == 0:
            return np.zeros((0, n))
        rho = np.asarray(self._anchor(q), dtype=float)
        if rho.shape != (m, n):
            raise ModelError("Anchor of '{}' has shape {}, expected {}.".format(self.name, rho.shape, (m, n)))
        return rho

    def _raw_structure(self, q):
        n = self.rank
        C = np.asarray(self._structure(q), dtype=float)
        if C.shape != (n, n, n):
            raise ModelError("Structure of '{}' has shape {}, expected {}.".format(self.name, C.shape, (n, n, n)))
        return C

    def anchor(self, q):
        q = self.chart.check(q)
        return check_finite(self._raw_anchor(q), 'anchor')

    def structure(self, q):
        q = self.chart.check(q)
        return check_finite(self._raw_structure(q), 'structure functions')

    def anchor_derivative(self, q):
        return self._anchor_derivative(self.chart.check(q))

    def structure_derivative(self, q):
        return self._structure_derivative(self.chart.check(q))

    def local_data(self, q):
        """(rho, C, d rho/dq, dC/dq) at q behind a single chart check."""
        q = self.chart.check(q)
        return (check_finite(self._raw_anchor(q), 'anchor'),
                check_finite(self._raw_structure(q), 'structure functions'),
                self._anchor_derivative(q),
                self._structure_derivative(q))

    def _anchor_derivative(self, q):
        m, n = self.base_dim, self.rank
        if m == 0 or (self.constant and self._anchor_jac is None):
            return np.zeros((m, n, m))
        if self._anchor_jac is not None:
            return check_finite(np.asarray(self._anchor_jac(q), dtype=float).reshape(m, n, m), 'anchor jacobian')
        return check_finite(central_difference(self._raw_anchor, q), 'anchor jacobian')

    def _structure_derivative(self, q):
        m, n = self.base_dim, self.rank
        if m == 0 or (self.constant and self._structure_jac is None):
            return np.zeros((n, n, n, m))
        if self._structure_jac is not None:
            return check_finite(np.asarray(self._structure_jac(q), dtype=float).reshape(n, n, n, m),
                                'structure jacobian')
        return check_finite(central_difference(self._raw_structure, q), 'structure jacobian')

    def covector(self, q, components):
        components = np.asarray(components, dtype=float).reshape(-1)
        if len(components) != self.rank:
            raise ModelError("Covector has {} components, algebroid rank is {}.".format(len(components), self.rank))
        return AlgebroidCovector(np.asarray(q, dtype=float), components)

    def __repr__(self):
        return "ChartedAlgebroid(name={}, base_dim={}, rank={})".format(self.name, self.base_dim, self.rank)

#####################################################
#                    CONSTRUCTORS                   #
#####################################################

def lie_algebra_algebroid(structure_constants, name='g'):
    """m = 0 algebroid of a Lie algebra with constant C[gamma, alpha, beta]."""
    C = np.array(structure_constants, dtype=float)
    C.setflags(write=False)
    return ChartedAlgebroid(BaseChart([]), C.shape[0],
                            anchor=lambda q: np.zeros((0, C.shape[0])),
                            structure=lambda q: C,
                            name=name,
                            constant=True)

def structure_from_brackets(rank, brackets):
    """Dense C[gamma, alpha, beta] from {(alpha, beta): {gamma: c}} with 0-based indices."""
    C = np.zeros((rank, rank, rank))
    for (a, b), terms in brackets.items():
        for g, c in terms.items():
            C[g, a, b] += c
            C[g, b, a] -= c
    return C
