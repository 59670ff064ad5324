import numpy as np

from algebroid.chart import BaseChart
from algebroid.algebroid import ChartedAlgebroid
from algebroid.fields import BaseField, zero_field
from algebroid.errors import ModelError
from poisson.phase import ScalarPhaseField
from poisson.hamiltonian import MechanicalHamiltonian
from modular.volumes import VolumeSpec, UnimodularityCertificate

from .bundle import ModelBundle
from .lie_algebras import lie_structure, inertia_matrix

POLE_GUARD = 1e-3

CARD = """Heavy top as the action algebroid so(3) x S^2 -> S^2.
Base: the unit vector Gamma = x(theta, phi) = (sin t cos f, sin t sin f, cos t) in body coordinates,
chart theta in (1e-3, pi - 1e-3) with phi unwrapped (covering chart, no cut).
Frame e_a acts by the rotation generators x -> x cross e_a:
  rho = [[sin f, -cos f, 0], [cot t cos f, cot t sin f, -1]], C = so(3) constants.
H = 1/2 p.I^-1.p + m g l x(theta, phi).e.
nu = sin(theta) dtheta dphi (sigma_nu = log sin theta); the rotation action preserves it, so the
modular section vanishes and Phi = dp1 dp2 dp3 ^ nu is preserved (sigma = 0).
Casimir: p.x(theta, phi)."""

def sphere_point(q):
    theta, phi = q
    return np.array([np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)])

def sphere_tangents(q):
    """dx/dtheta, dx/dphi as the rows of a (2, 3) array."""
    theta, phi = q
    return np.array([[np.cos(theta) * np.cos(phi), np.cos(theta) * np.sin(phi), -np.sin(theta)],
                     [-np.sin(theta) * np.sin(phi), np.sin(theta) * np.cos(phi), 0.]])

def sphere_second_derivatives(q):
    """d^2 x / dq^i dq^j as a (2, 2, 3) array."""
    theta, phi = q
    x = sphere_point(q)
    mixed = np.array([-np.cos(theta) * np.sin(phi), np.cos(theta) * np.cos(phi), 0.])
    return np.array([[-x, mixed],
                     [mixed, [-x[0], -x[1], 0.]]])

def rotation_anchor(q):
    theta, phi = q
    cot = np.cos(theta) / np.sin(theta)
    return np.array([[np.sin(phi), -np.cos(phi), 0.],
                     [cot * np.cos(phi), cot * np.sin(phi), -1.]])

def rotation_anchor_jac(q):
    theta, phi = q
    cot = np.cos(theta) / np.sin(theta)
    csc2 = 1. / np.sin(theta) ** 2
    D = np.zeros((2, 3, 2))
    D[1, :, 0] = [-csc2 * np.cos(phi), -csc2 * np.sin(phi), 0.]
    D[0, :, 1] = [np.cos(phi), np.sin(phi), 0.]
    D[1, :, 1] = [-cot * np.sin(phi), cot * np.cos(phi), 0.]
    return D

def make_heavy_top(mass=1., gravity=1., length=1., inertia=(1., 1., 2.), axis=(0., 0., 1.), name='heavy-top'):
    axis = np.asarray(axis, dtype=float)
    if axis.shape != (3,) or abs(np.linalg.norm(axis) - 1.) > 1e-12:
        raise ModelError("Heavy-top axis must be a unit 3-vector, got {}.".format(axis.tolist()))
    if mass <= 0 or length <= 0:
        raise ModelError("Heavy-top mass and length must be positive.")
    inertia = inertia_matrix(inertia, 3)
    G = np.linalg.inv(inertia)
    G = 0.5 * (G + G.T)
    C = lie_structure('so3')
    mgl = mass * gravity * length

    chart = BaseChart(['theta', 'phi'], [POLE_GUARD, -np.inf], [np.pi - POLE_GUARD, np.inf])
    alg = ChartedAlgebroid(chart, 3,
                           anchor=rotation_anchor,
                           structure=lambda q: C,
                           anchor_jac=rotation_anchor_jac,
                           structure_jac=lambda q: np.zeros((3, 3, 3, 2)),
                           name='so(3) x S^2')

    V = BaseField(lambda q: mgl * sphere_point(q).dot(axis),
                  lambda q: mgl * sphere_tangents(q).dot(axis),
                  lambda q: mgl * sphere_second_derivatives(q).dot(axis),
                  name='gravity')
    mech = MechanicalHamiltonian(lambda q: G, V, constant_cometric=True, name='H_heavy_top')

    area = BaseField(lambda q: np.log(np.sin(q[0])),
                     lambda q: np.array([np.cos(q[0]) / np.sin(q[0]), 0.]),
                     lambda q: np.array([[-1. / np.sin(q[0]) ** 2, 0.], [0., 0.]]),
                     name='log_sin_theta')

    def casimir_gradient(q, p):
        return np.concatenate([sphere_tangents(q).dot(p), sphere_point(q)])
    casimir = ScalarPhaseField(lambda q, p: sphere_point(q).dot(p), casimir_gradient, name='casimir_p_dot_gamma',
                               alg=alg)

    return ModelBundle(name,
                       alg,
                       mech,
                       VolumeSpec(2, base_log_density=area),
                       certificate=UnimodularityCertificate(zero_field(2, 'sigma')),
                       params={'mass': mass, 'gravity': gravity, 'length': length,
                               'inertia': inertia.tolist(), 'axis': axis.tolist()},
                       expected={'unimodular': True, 'casimirs': [casimir]},
                       card=CARD,
                       default_x0=([np.pi / 2, 0.], [0., 0., 5.]))
