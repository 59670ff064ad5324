import numpy as np

from algebroid.chart import BaseChart
from algebroid.algebroid import ChartedAlgebroid
from algebroid.fields import BaseField, zero_field
from poisson.hamiltonian import MechanicalHamiltonian
from modular.volumes import VolumeSpec, UnimodularityCertificate

from .bundle import ModelBundle

CARD = """Standard mechanical system on T*Q, Q = R^m.
A = TQ with the coordinate frame: rho = identity, C = 0.
G = identity, V = 1/2 k |q|^2 (harmonic) or 0 (free).
TQ is unimodular with sigma = 0: Lebesgue measure dq dp is preserved (Liouville)."""

def harmonic_potential(m, stiffness=1.):
    return BaseField(lambda q: 0.5 * stiffness * q.dot(q),
                     lambda q: stiffness * q,
                     lambda q: stiffness * np.eye(m),
                     name='harmonic')

def make_standard(m=1, potential='harmonic', stiffness=1., name=None):
    if int(m) < 1:
        raise ValueError("Standard model needs m >= 1, got {}.".format(m))
    m = int(m)
    coords = ['q{}'.format(i + 1) for i in range(m)]
    identity = np.eye(m)
    zeros = np.zeros((m, m, m))

    alg = ChartedAlgebroid(BaseChart(coords), m,
                           anchor=lambda q: identity,
                           structure=lambda q: zeros,
                           name='TR^{}'.format(m),
                           constant=True)

    if potential == 'harmonic':
        V = harmonic_potential(m, stiffness)
    elif potential == 'free':
        V = zero_field(m, 'free')
    elif isinstance(potential, BaseField):
        V = potential
    else:
        raise ValueError("Potential {} not recognized.".format(potential))

    mech = MechanicalHamiltonian(lambda q: identity, V, constant_cometric=True, name='H_standard')
    return ModelBundle(name or 'standard',
                       alg,
                       mech,
                       VolumeSpec(m),
                       certificate=UnimodularityCertificate(zero_field(m, 'sigma')),
                       params={'m': m, 'potential': V.name, 'stiffness': stiffness},
                       expected={'unimodular': True, 'casimirs': []},
                       card=CARD,
                       default_x0=(np.ones(m), np.zeros(m)) if V.name == 'harmonic' else (np.zeros(m), np.ones(m)))
