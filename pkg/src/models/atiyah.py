import numpy as np

from algebroid.chart import BaseChart
from algebroid.algebroid import ChartedAlgebroid, lie_algebra_algebroid
from algebroid.fields import zero_field
from poisson.hamiltonian import MechanicalHamiltonian
from modular.volumes import VolumeSpec, UnimodularityCertificate
from modular.modular_section import modular_character

from .bundle import ModelBundle
from .lie_algebras import lie_structure, lie_casimirs, inertia_matrix, DEFAULT_INERTIA
from .standard import harmonic_potential

CARD = """Trivial Atiyah algebroid g x TM -> M, M = R^m.
Frame: e_1..e_k a basis of g, then the coordinate fields d/dq^i.
rho = [0 | I], C = structure constants of g on the g-slots, 0 elsewhere.
G = I_g^-1 (+) identity, V = 1/2 |q|^2.
Hamilton's equations split into the canonical T*M block and the Lie-Poisson g* block.
Unimodular exactly when g is."""

def make_trivial_atiyah(lie_name='so3', m_base=1, inertia=None, name=None):
    if int(m_base) < 1:
        raise ValueError("Atiyah model needs m_base >= 1, got {}.".format(m_base))
    m = int(m_base)
    C_g = lie_structure(lie_name)
    k = C_g.shape[0]
    n = k + m
    inertia = inertia_matrix(DEFAULT_INERTIA[lie_name] if inertia is None else inertia, k)

    C = np.zeros((n, n, n))
    C[:k, :k, :k] = C_g
    anchor = np.zeros((m, n))
    anchor[:, k:] = np.eye(m)

    G = np.eye(n)
    G[:k, :k] = np.linalg.inv(inertia)
    G = 0.5 * (G + G.T)

    coords = ['q{}'.format(i + 1) for i in range(m)]
    alg = ChartedAlgebroid(BaseChart(coords), n,
                           anchor=lambda q: anchor,
                           structure=lambda q: C,
                           name='{} x TR^{}'.format(lie_name, m),
                           constant=True)
    mech = MechanicalHamiltonian(lambda q: G, harmonic_potential(m), constant_cometric=True, name='H_atiyah')

    unimodular = not np.any(modular_character(lie_algebra_algebroid(C_g)))
    certificate = UnimodularityCertificate(zero_field(m, 'sigma')) if unimodular else None

    return ModelBundle(name or 'atiyah-{}'.format(lie_name),
                       alg,
                       mech,
                       VolumeSpec(m),
                       certificate=certificate,
                       params={'lie_algebra': lie_name, 'm_base': m, 'inertia': inertia.tolist()},
                       expected={'unimodular': unimodular, 'casimirs': lie_casimirs(lie_name, base_dim=m)},
                       card=CARD,
                       default_x0=(np.full(m, 0.5), np.concatenate([np.linspace(1., 0.2, k), np.zeros(m)])))
