import numpy as np
import pytest

from algebroid import TrajectoryEscapeError, PreconditionError
from algebroid.fields import zero_field
from algebroid.algebroid import ChartedAlgebroid
from poisson import PhasePoint, MechanicalHamiltonian, quadratic_field, phase_point
from modular import VolumeSpec, PhaseDensity, zero_density, basic_density, metric_fiber_density
from models import get_model
from models.model_file import density_from_expression
from integrate import IntegratorConfig, integrate
from utils.general_utils import get_nb_procs
from volume import (divergence, modular_vector_field_value, vertical_derivative, jacobian_log_det, drift_batch,
                    zero_section_obstruction)

def random_points(alg, rng, n, scale=1.):
    qs = alg.chart.sample(rng, n) if alg.base_dim else np.zeros((n, 0))
    return [PhasePoint(q, scale * rng.standard_normal(alg.rank)) for q in qs]

def random_mechanical(bundle, rng):
    n = bundle.algebroid.rank
    A = rng.standard_normal((n, n))
    G = A.dot(A.T) + np.eye(n)
    return MechanicalHamiltonian(lambda q: G, bundle.hamiltonian.potential, constant_cometric=True, name='H_random')

#####################################################
#                    DIVERGENCE                     #
#####################################################

def test_constant_hamiltonian_has_zero_divergence():
    bundle = get_model('heavy-top')
    alg = bundle.algebroid
    H = quadratic_field(np.zeros((5, 5)), np.zeros(5), 3.)
    x = phase_point(alg, [1., 0.2], [1., 2., 3.])
    assert divergence(alg, H, bundle.volume, zero_density(alg), x).divergence == 0.

def test_aff1_divergence():
    bundle = get_model('aff1')
    alg = bundle.algebroid
    report = divergence(alg, bundle.hamiltonian, bundle.volume, zero_density(alg),
                        PhasePoint(np.zeros(0), np.array([2., 5.])))
    assert abs(report.divergence - 2.) < 1e-10
    assert report.divergence == sum(report.density_breakdown)

@pytest.mark.parametrize('name', ['harmonic', 'free-particle', 'so3', 'se2', 'heisenberg', 'heavy-top', 'beanie',
                                  'atiyah-so3'])
def test_certified_models_preserve_volume(name, rng):
    bundle = get_model(name)
    alg = bundle.algebroid
    vol, density = bundle.preserved_volume()
    for x in random_points(alg, rng, 100):
        assert abs(divergence(alg, bundle.hamiltonian, vol, density, x).divergence) < 1e-8

@pytest.mark.parametrize('name', ['aff1', 'heavy-top', 'atiyah-aff1'])
def test_divergence_is_modular_field_on_hamiltonian(name, rng):
    bundle = get_model(name)
    alg = bundle.algebroid
    for _ in range(3):
        H = random_mechanical(bundle, rng)
        for x in random_points(alg, rng, 100):
            div = divergence(alg, H, bundle.volume, zero_density(alg), x).divergence
            M = modular_vector_field_value(alg, bundle.volume, x)
            assert abs(div - M.dot(H.gradient(x.q, x.p))) < 1e-8

def test_atiyah_aff1_divergence_is_p1(rng):
    bundle = get_model('atiyah-aff1')
    alg = bundle.algebroid
    for x in random_points(alg, rng, 20):
        div = divergence(alg, bundle.hamiltonian, bundle.volume, zero_density(alg), x).divergence
        assert div == pytest.approx(x.p[0], abs=1e-12)

def test_modular_vector_field_values():
    aff1 = get_model('aff1')
    x = PhasePoint(np.zeros(0), np.array([0.3, -2.]))
    assert np.array_equal(modular_vector_field_value(aff1.algebroid, aff1.volume, x), [1., 0.])

    beanie = get_model('beanie')
    x = phase_point(beanie.algebroid, [0.5], np.ones(4))
    assert not np.any(modular_vector_field_value(beanie.algebroid, beanie.volume, x))

#####################################################
#                VERTICAL DERIVATIVE                #
#####################################################

def test_vertical_derivative_of_basic_density(rng):
    bundle = get_model('heavy-top')
    density = basic_density(bundle.algebroid, bundle.volume.base_log_density)
    for x in random_points(bundle.algebroid, rng, 5):
        assert not np.any(vertical_derivative(density, x))

def test_vertical_derivative_of_linear_density():
    alg = get_model('atiyah-so3').algebroid
    density = density_from_expression('p1 + p2 + p3 + p4', alg)
    x = phase_point(alg, [0.7], [1., -2., 3., 4.])
    assert np.allclose(vertical_derivative(density, x), np.ones(4), atol=1e-14)

def test_vertical_derivative_of_kinetic_density():
    alg = get_model('so3').algebroid
    x = PhasePoint(np.zeros(0), np.array([1., 2., 3.]))
    symbolic = density_from_expression('(p1^2 + p2^2 + p3^2)/2', alg)
    quadratic = PhaseDensity(quadratic_field(np.eye(3), np.zeros(3)))
    assert np.allclose(vertical_derivative(symbolic, x), [1., 2., 3.], atol=1e-14)
    assert np.allclose(vertical_derivative(quadratic, x), [1., 2., 3.], atol=1e-14)
    assert np.allclose(quadratic.fiber_hessian(np.zeros(0), 3), np.eye(3), atol=1e-8)

#####################################################
#                   VOLUME DRIFT                    #
#####################################################

def test_drift_at_time_zero():
    bundle = get_model('heavy-top')
    vol, density = bundle.preserved_volume()
    report = jacobian_log_det(bundle.algebroid, bundle.hamiltonian, bundle.default_x0, 0., 1e-3, vol, density)
    assert report == (0., 0., 0., 0., 0., 0., 0.)

def test_drift_volume_needs_both_parts():
    bundle = get_model('heavy-top')
    with pytest.raises(ValueError):
        jacobian_log_det(bundle.algebroid, bundle.hamiltonian, bundle.default_x0, 1., 1e-2, vol=bundle.volume)

def test_euler_top_preserves_volume():
    bundle = get_model('so3')
    x0 = PhasePoint(np.zeros(0), np.array([1., 0.2, 0.1]))
    report = jacobian_log_det(bundle.algebroid, bundle.hamiltonian, x0, 10., 1e-3)
    assert abs(report.log_det_jacobian) < 1e-6

def test_aff1_volume_grows():
    bundle = get_model('aff1')
    x0 = PhasePoint(np.zeros(0), np.array([1., 0.]))
    report = jacobian_log_det(bundle.algebroid, bundle.hamiltonian, x0, 1., 1e-3)
    # p stays at (1, 0), so the drift is the integral of p1
    assert report.log_det_jacobian > 0.1
    assert report.log_det_jacobian == pytest.approx(1., abs=1e-6)
    assert report.discrepancy < 1e-6

def test_beanie_preserves_volume():
    bundle = get_model('beanie')
    report = jacobian_log_det(bundle.algebroid, bundle.hamiltonian, bundle.default_x0, 10., 1e-3)
    assert abs(report.log_det_jacobian) < 1e-5
    assert report.discrepancy < 1e-6

def test_heavy_top_drift_matches_divergence():
    bundle = get_model('heavy-top')
    report = jacobian_log_det(bundle.algebroid, bundle.hamiltonian, bundle.default_x0, 1., 1e-3)
    assert report.discrepancy < 1e-6

def test_heavy_top_drift_is_relative_to_area():
    # Lebesgue log det follows -log sin(theta); the certified volume sin(theta) dtheta dphi dp does not move
    bundle = get_model('heavy-top')
    alg = bundle.algebroid
    vol, density = bundle.preserved_volume()
    x0 = phase_point(alg, [1.2, 0.3], [0.3, -0.2, 1.])
    report = jacobian_log_det(alg, bundle.hamiltonian, x0, 2., 1e-3, vol, density)
    assert report.volume_discrepancy < 1e-6
    assert abs(report.volume_log_det) < 1e-6
    final = integrate(alg, bundle.hamiltonian, x0, IntegratorConfig(t_final=2., dt=1e-3)).final_state
    area_change = np.log(np.sin(final.q[0])) - np.log(np.sin(x0.q[0]))
    assert report.log_det_jacobian == pytest.approx(-area_change, abs=1e-6)

    plain = jacobian_log_det(alg, bundle.hamiltonian, x0, 2., 1e-3)
    assert plain.log_det_jacobian == report.log_det_jacobian
    assert plain.volume_log_det == plain.log_det_jacobian

def liouville_starts(name, alg, rng, n):
    if name == 'heavy-top':
        # p3 and p.gamma are conserved, which keeps theta off the poles
        return [PhasePoint(np.array([rng.uniform(1., 2.), rng.uniform(-np.pi, np.pi)]),
                           np.concatenate([rng.uniform(-0.1, 0.1, 2), [rng.uniform(0.8, 1.2)]])) for _ in range(n)]
    if name == 'beanie':
        return [PhasePoint(rng.uniform(-0.5, 0.5, 1), rng.uniform(-0.05, 0.05, alg.rank)) for _ in range(n)]
    return [PhasePoint(rng.uniform(-1., 1., alg.base_dim), rng.uniform(-1., 1., alg.rank)) for _ in range(n)]

@pytest.mark.parametrize('name, params', [
    ('standard', {'m': 1}),
    ('standard', {'m': 2}),
    ('so3', {}),
    ('se2', {}),
    ('heisenberg', {}),
    ('heavy-top', {}),
    ('beanie', {}),
])
def test_liouville_drift(name, params, rng):
    bundle = get_model(name, **params)
    starts = liouville_starts(name, bundle.algebroid, rng, 10)
    reports = drift_batch(bundle, starts, 10., 1e-3, nb_procs=get_nb_procs(0))
    for report in reports:
        assert abs(report.volume_log_det) < 1e-5
        assert report.volume_discrepancy < 1e-6

def test_drift_escape(bounded_line):
    alg, mech = bounded_line
    x0 = phase_point(alg, [0.], [1.])
    with pytest.raises(TrajectoryEscapeError) as info:
        jacobian_log_det(alg, mech, x0, 2., 1e-2)
    assert info.value.exit_time == pytest.approx(1., abs=0.02)

def test_drift_batch_keeps_input_order(rng):
    bundle = get_model('aff1')
    starts = [PhasePoint(np.zeros(0), np.array([p1, 0.])) for p1 in (0.5, -1., 2.)]
    reports = drift_batch(bundle, starts, 0.5, 1e-2)
    for x0, report in zip(starts, reports):
        assert report.log_det_jacobian == pytest.approx(0.5 * x0.p[0], abs=1e-7)

def test_drift_batch_in_parallel_matches_serial():
    bundle = get_model('so3')
    starts = [PhasePoint(np.zeros(0), np.array(p)) for p in ([1., 0.2, 0.1], [0.3, 1., -1.], [2., 0., 1.])]
    serial = drift_batch(bundle, starts, 0.5, 1e-2)
    parallel = drift_batch(bundle, starts, 0.5, 1e-2, nb_procs=2)
    assert serial == parallel

#####################################################
#                    OBSTRUCTION                    #
#####################################################

def test_aff1_obstruction_is_character():
    bundle = get_model('aff1')
    alg, mech = bundle.algebroid, bundle.hamiltonian
    vol = bundle.volume.with_fiber(metric_fiber_density(mech, 0))
    R = zero_section_obstruction(alg, mech, vol, zero_density(alg), zero_field(0), np.zeros(0))
    G = mech.cometric(np.zeros(0))
    assert np.allclose(R, G.dot([1., 0.]), atol=1e-10)

@pytest.mark.parametrize('name', ['beanie', 'heavy-top', 'atiyah-so3', 'standard'])
def test_obstruction_vanishes_for_preserved_volume(name, rng):
    bundle = get_model(name)
    alg = bundle.algebroid
    vol, density = bundle.preserved_volume()
    for q in alg.chart.sample(rng, 50):
        R = zero_section_obstruction(alg, bundle.hamiltonian, vol, density, bundle.certificate.sigma, q)
        assert np.max(np.abs(R)) < 1e-6

def test_obstruction_of_kinetic_density():
    # sigma~ = 1/2 |p|^2 on T*R: its fiber Hessian sees the potential force
    bundle = get_model('harmonic')
    alg = bundle.algebroid
    vol = bundle.volume.with_fiber(metric_fiber_density(bundle.hamiltonian, 1))
    density = density_from_expression('p1^2/2', alg)
    q = np.array([0.4])
    R = zero_section_obstruction(alg, bundle.hamiltonian, vol, density, zero_field(1), q)
    assert np.allclose(R, [-0.4], atol=1e-12)

def test_obstruction_checks_zero_section_consistency():
    bundle = get_model('harmonic')
    alg = bundle.algebroid
    density = density_from_expression('q1 + p1', alg)
    with pytest.raises(PreconditionError):
        zero_section_obstruction(alg, bundle.hamiltonian, bundle.volume, density, zero_field(1), np.array([0.5]))

@pytest.mark.parametrize('name', ['harmonic', 'free-particle', 'so3', 'se2', 'heisenberg', 'heavy-top', 'beanie',
                                  'atiyah-so3'])
def test_zero_divergence_forces_zero_obstruction(name, rng):
    bundle = get_model(name)
    alg, mech = bundle.algebroid, bundle.hamiltonian
    vol, density = bundle.preserved_volume()
    points = random_points(alg, rng, 30)
    assert max(abs(divergence(alg, mech, vol, density, x).divergence) for x in points) < 1e-8
    for x in points:
        R = zero_section_obstruction(alg, mech, vol, density, bundle.certificate.sigma, x.q)
        assert np.max(np.abs(R)) < 1e-6

def test_obstruction_detects_divergence(rng):
    # exp(p1^2 / 2) dq dp is not invariant under the oscillator flow: both tests see it
    bundle = get_model('harmonic')
    alg, mech = bundle.algebroid, bundle.hamiltonian
    vol = bundle.volume.with_fiber(metric_fiber_density(mech, 1))
    density = density_from_expression('p1^2/2', alg)
    points = random_points(alg, rng, 30)
    assert max(abs(divergence(alg, mech, vol, density, x).divergence) for x in points) > 1e-3
    assert max(np.max(np.abs(zero_section_obstruction(alg, mech, vol, density, zero_field(1), x.q)))
               for x in points) > 1e-3

def test_drift_reads_constant_model_data_once(bounded_line):
    alg, mech = bounded_line
    calls = []
    counted = ChartedAlgebroid(alg.chart, 1,
                               anchor=lambda q: calls.append(q) or np.eye(1),
                               structure=lambda q: np.zeros((1, 1, 1)),
                               constant=True)
    del calls[:]
    report = jacobian_log_det(counted, mech, phase_point(counted, [0.], [0.5]), 0.5, 1e-2)
    assert report.log_det_jacobian == pytest.approx(0., abs=1e-14)
    assert len(calls) == 1
