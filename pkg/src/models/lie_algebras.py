import numpy as np

from algebroid.algebroid import lie_algebra_algebroid, structure_from_brackets
from algebroid.fields import zero_field
from algebroid.errors import ModelError
from poisson.phase import ScalarPhaseField
from poisson.hamiltonian import MechanicalHamiltonian
from modular.volumes import VolumeSpec, UnimodularityCertificate
from modular.modular_section import modular_character

from .bundle import ModelBundle

# [e_a, e_b] = sum_g c e_g, 0-based
BRACKETS = {
    'so3': (3, {(0, 1): {2: 1.}, (1, 2): {0: 1.}, (2, 0): {1: 1.}}),
    'se2': (3, {(0, 1): {2: 1.}, (0, 2): {1: -1.}}),
    'aff1': (2, {(0, 1): {1: 1.}}),
    'heisenberg': (3, {(0, 1): {2: 1.}}),
}

DEFAULT_INERTIA = {
    'so3': (1., 2., 3.),
    'se2': (1., 1., 1.),
    'aff1': (1., 1.),
    'heisenberg': (1., 1., 1.),
}

CARDS = {
    'so3': "so(3), [e1,e2] = e3 and cyclic. Euler top: H = 1/2 p.I^-1.p. Unimodular (character 0); |p|^2 is a Casimir.",
    'se2': "se(2), e1 rotation, e2 and e3 translations: [e1,e2] = e3, [e1,e3] = -e2. Unimodular; p2^2 + p3^2 is a Casimir.",
    'aff1': "aff(1), [e1,e2] = e2. Character (1, 0): not unimodular, so no kinetic flow preserves Lebesgue "
            "measure on aff(1)*; the divergence of the kinetic flow is p1.",
    'heisenberg': "Heisenberg algebra, [e1,e2] = e3. Nilpotent, hence unimodular; p3 is a Casimir.",
}

def lie_structure(lie_name):
    if lie_name not in BRACKETS:
        raise ValueError("Lie algebra {} not recognized.".format(lie_name))
    rank, brackets = BRACKETS[lie_name]
    return structure_from_brackets(rank, brackets)

def inertia_matrix(inertia, rank):
    """Diagonal entries or a full matrix; must be symmetric positive-definite."""
    inertia = np.asarray(inertia, dtype=float)
    if inertia.ndim == 1:
        inertia = np.diag(inertia)
    if inertia.shape != (rank, rank):
        raise ModelError("Inertia has shape {}, expected {}.".format(inertia.shape, (rank, rank)))
    if np.max(np.abs(inertia - inertia.T)) > 0 or np.min(np.linalg.eigvalsh(inertia)) <= 0:
        raise ModelError("Inertia must be symmetric positive-definite.")
    return inertia

def lie_casimirs(lie_name, base_dim=0, offset=0):
    """Casimirs of g* in the p-slots offset..offset+rank of a phase space with m = base_dim."""
    def sum_of_squares(slots, name):
        slots = [base_dim + offset + s for s in slots]

        def value(q, p):
            x = np.concatenate([q, p])
            return float(np.sum(x[slots] ** 2))

        def gradient(q, p):
            x = np.concatenate([q, p])
            g = np.zeros(len(x))
            g[slots] = 2. * x[slots]
            return g
        return ScalarPhaseField(value, gradient, name=name)

    def linear(slot, name):
        index = base_dim + offset + slot

        def gradient(q, p):
            g = np.zeros(len(q) + len(p))
            g[index] = 1.
            return g
        return ScalarPhaseField(lambda q, p: np.concatenate([q, p])[index], gradient, name=name)

    if lie_name == 'so3':
        return [sum_of_squares([0, 1, 2], 'casimir_norm2')]
    if lie_name == 'se2':
        return [sum_of_squares([1, 2], 'casimir_translation_norm2')]
    if lie_name == 'heisenberg':
        return [linear(2, 'casimir_center')]
    return []

def make_lie_algebra(lie_name='so3', inertia=None, name=None):
    """Lie-Poisson system on g* for H = 1/2 p.I^-1.p (m = 0)."""
    C = lie_structure(lie_name)
    rank = C.shape[0]
    inertia = inertia_matrix(DEFAULT_INERTIA[lie_name] if inertia is None else inertia, rank)
    G = np.linalg.inv(inertia)
    G = 0.5 * (G + G.T)

    alg = lie_algebra_algebroid(C, name=lie_name)
    character = modular_character(alg)
    unimodular = not np.any(character)

    mech = MechanicalHamiltonian(lambda q: G, zero_field(0, 'V'), constant_cometric=True, name='H_kinetic')
    certificate = UnimodularityCertificate(zero_field(0, 'sigma')) if unimodular else None

    default_p = {'so3': (1., 0.2, 0.1), 'aff1': (1., 0.)}.get(lie_name, np.ones(rank))
    return ModelBundle(name or lie_name,
                       alg,
                       mech,
                       VolumeSpec(0),
                       certificate=certificate,
                       params={'lie_algebra': lie_name, 'inertia': inertia.tolist()},
                       expected={'unimodular': unimodular, 'casimirs': lie_casimirs(lie_name)},
                       card=CARDS[lie_name],
                       default_x0=(np.zeros(0), default_p))
