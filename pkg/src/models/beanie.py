import numpy as np

from algebroid.chart import BaseChart
from algebroid.algebroid import ChartedAlgebroid
from algebroid.fields import zero_field
from algebroid.errors import ModelError
from poisson.hamiltonian import MechanicalHamiltonian
from modular.volumes import VolumeSpec, UnimodularityCertificate

from .bundle import ModelBundle
from .lie_algebras import lie_structure, lie_casimirs

CARD = """Beanie: two planar rigid bodies joined at their centre of mass, free in the plane.
Atiyah algebroid se(2) x TS^1 -> S^1 over the relative angle theta in (-pi, pi).
Frame: e1 = rotation, e2, e3 = translations of se(2), e4 = d/dtheta;
[e1,e2] = e3, [e1,e3] = -e2, rho(e4) = d/dtheta, rho(e1..e3) = 0.
Metric on (xi_rot, xi_2, xi_3, theta'):
  [[I1+I2, 0, 0, I2], [0, m, 0, 0], [0, 0, m, 0], [I2, 0, 0, I2]]
The I2 cross term couples the rotation slot xi_rot with the shape velocity; this fixes one reading of
which se(2) slot is the rotation. G is its inverse, V = 0.
se(2) is unimodular and G is constant: Phi = dp ^ dtheta is preserved (sigma = 0).
Casimir: p2^2 + p3^2."""

def beanie_metric(mass, I1, I2):
    return np.array([[I1 + I2, 0., 0., I2],
                     [0., mass, 0., 0.],
                     [0., 0., mass, 0.],
                     [I2, 0., 0., I2]])

def make_beanie(mass=1., I1=1., I2=0.5, name='beanie'):
    if min(mass, I1, I2) <= 0:
        raise ModelError("Beanie needs mass, I1, I2 > 0, got {}, {}, {}.".format(mass, I1, I2))
    K = beanie_metric(mass, I1, I2)
    try:
        np.linalg.cholesky(K)
    except np.linalg.LinAlgError:
        raise ModelError("Beanie metric is not positive-definite.")
    # inverted once; the metric is constant
    G = np.linalg.inv(K)
    G = 0.5 * (G + G.T)

    C = np.zeros((4, 4, 4))
    C[:3, :3, :3] = lie_structure('se2')
    anchor = np.array([[0., 0., 0., 1.]])

    chart = BaseChart(['theta'], [-np.pi], [np.pi])
    alg = ChartedAlgebroid(chart, 4,
                           anchor=lambda q: anchor,
                           structure=lambda q: C,
                           name='se(2) x TS^1',
                           constant=True)
    mech = MechanicalHamiltonian(lambda q: G, zero_field(1, 'V'), constant_cometric=True, name='H_beanie')

    return ModelBundle(name,
                       alg,
                       mech,
                       VolumeSpec(1),
                       certificate=UnimodularityCertificate(zero_field(1, 'sigma')),
                       params={'mass': mass, 'I1': I1, 'I2': I2},
                       expected={'unimodular': True, 'casimirs': lie_casimirs('se2', base_dim=1)},
                       card=CARD,
                       default_x0=([0.3], [0.1, 1., 0.5, 0.05]))
