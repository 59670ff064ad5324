import os
import csv
import json

import numpy as np
import pytest

from main_algebroid import main
from cli import EXIT_OK, EXIT_EXPECTATION, EXIT_USAGE, EXIT_NUMERIC
from cli.run_volume import sample_phase_points
from models import get_model
from utils.numeric_utils import make_rng

def run(tmp_path, *argv, name='out'):
    output = str(tmp_path / name)
    code = main(list(argv) + ['--output', output])
    return code, output

def read_json(path):
    with open(path) as f:
        return json.load(f)

def read_csv(path):
    with open(path) as f:
        return list(csv.reader(f))

def read_bytes(path):
    with open(path, 'rb') as f:
        return f.read()

#####################################################
#                     VALIDATE                      #
#####################################################

def test_validate_so3(tmp_path):
    code, output = run(tmp_path, 'validate', '--model', 'so3')
    report = read_json(output)
    assert code == EXIT_OK
    assert report['passed']
    assert report['max_anchor_residual'] < 1e-12
    assert report['max_jacobi_residual'] < 1e-12
    assert report['grid_size'] == 1

def test_validate_heavy_top_grid(tmp_path):
    code, output = run(tmp_path, 'validate', '--model', 'heavy-top', '--samples', '20')
    assert code == EXIT_OK
    assert read_json(output)['grid_size'] == 40

def test_validate_reports_broken_model_file(tmp_path):
    structure = np.zeros((3, 3, 3), dtype=int).astype(str).tolist()
    for g, a, b, c in [(2, 0, 1, '1'), (0, 1, 2, '1'), (1, 2, 0, '1'), (0, 0, 1, '1')]:
        structure[g][a][b] = c
        structure[g][b][a] = '-' + c
    path = str(tmp_path / 'broken.json')
    with open(path, 'w') as f:
        json.dump({'base_dim': 0, 'rank': 3, 'structure': structure,
                   'hamiltonian': {'cometric': np.eye(3, dtype=int).astype(str).tolist()}}, f)
    code, output = run(tmp_path, 'validate', '--model', path)
    assert code == EXIT_EXPECTATION
    assert not read_json(output)['passed']
    # every other subcommand refuses the model
    assert run(tmp_path, 'modular', '--model', path)[0] == EXIT_USAGE

def test_validate_model_files(tmp_path, model_files):
    for name in ['rigid_body.json', 'polar_particle.yaml']:
        code, _ = run(tmp_path, 'validate', '--model', os.path.join(model_files, name))
        assert code == EXIT_OK

#####################################################
#                     SIMULATE                      #
#####################################################

def test_simulate_at_time_zero(tmp_path):
    code, output = run(tmp_path, 'simulate', '--model', 'heavy-top', '--t-final', '0')
    rows = read_csv(output)
    assert code == EXIT_OK
    assert rows[0] == ['t', 'q_1', 'q_2', 'p_1', 'p_2', 'p_3', 'energy']
    assert len(rows) == 2
    assert [float(v) for v in rows[1][:6]] == [0., np.pi / 2, 0., 0., 0., 5.]

def test_simulate_monitors(tmp_path):
    code, output = run(tmp_path, 'simulate', '--model', 'so3', '--x0', '1,1,1', '--t-final', '0.1', '--dt', '0.01',
                       '--monitors', 'energy,casimir,divergence')
    rows = read_csv(output)
    assert code == EXIT_OK
    assert rows[0] == ['t', 'p_1', 'p_2', 'p_3', 'energy', 'casimir_norm2', 'divergence']
    assert len(rows) == 11
    assert float(rows[-1][0]) == 0.1
    assert abs(float(rows[-1][5]) - 3.) < 1e-9
    assert rows[1][1] == '1'

def test_simulate_adaptive_flags(tmp_path):
    code, output = run(tmp_path, 'simulate', '--model', 'harmonic', '--t-final', '1', '--rtol', '1e-9',
                       '--monitors', '')
    rows = read_csv(output)
    assert code == EXIT_OK
    assert rows[0] == ['t', 'q_1', 'p_1']
    assert abs(float(rows[-1][1]) - np.cos(1.)) < 1e-7

def test_simulate_reports_chart_exit_as_truncation(tmp_path):
    code, output = run(tmp_path, 'simulate', '--model', 'beanie', '--x0', '3.1,0,0,0,1', '--t-final', '1',
                       '--dt', '0.01')
    assert code == EXIT_OK
    assert float(read_csv(output)[-1][0]) < 1.

def test_simulate_stiffness(tmp_path):
    code, _ = run(tmp_path, 'simulate', '--model', 'harmonic', '--method', 'rkf45_adaptive', '--dt', '1',
                  '--dt-min', '0.5', '--dt-max', '1', '--rtol', '1e-12', '--atol', '1e-12')
    assert code == EXIT_NUMERIC

@pytest.mark.parametrize('argv', [
    ['simulate', '--model', 'heavy-top', '--x0', '0,0,1,2,3'],
    ['simulate', '--model', 'heavy-top', '--x0', '1,0,1'],
    ['simulate', '--model', 'heavy-top', '--x0', '1,a,1,2,3'],
    ['simulate', '--model', 'so3', '--monitors', 'entropy'],
    ['simulate', '--model', 'so3', '--dt', '-1'],
    ['simulate', '--model', 'pendulum'],
    ['simulate', '--model', 'so3', '--unknown-flag'],
    ['simulate'],
    ['integrate', '--model', 'so3'],
    ['validate', '--model', 'so3', '--samples', '0'],
    ['modular', '--model', 'heavy-top', '--samples', '0'],
    ['volume', '--model', 'harmonic', '--samples', '0'],
    ['volume', '--model', 'harmonic', '--samples', '-3'],
    ['volume', '--model', 'harmonic', '--trajectories', '-1'],
])
def test_usage_errors(tmp_path, argv):
    assert run(tmp_path, *argv)[0] == EXIT_USAGE

#####################################################
#                      MODULAR                      #
#####################################################

def test_modular_aff1(tmp_path):
    code, output = run(tmp_path, 'modular', '--model', 'aff1')
    report = read_json(output)
    assert code == EXIT_OK
    assert report['character'] == [1., 0.]
    assert report['points'] == [{'q': [], 'M': [1., 0.]}]
    assert report['certificate'] is None

def test_modular_certificates(tmp_path):
    code, output = run(tmp_path, 'modular', '--model', 'heavy-top', '--points', '1,0.5;2,-1', '--samples', '10')
    report = read_json(output)
    assert code == EXIT_OK
    assert len(report['points']) == 2
    assert report['certificate']['verified']
    assert report['character'] is None

    code, output = run(tmp_path, 'modular', '--model', 'heavy-top', '--certificate', 'cos(theta)', '--samples', '10')
    assert code == EXIT_EXPECTATION
    assert not read_json(output)['certificate']['verified']

    code, _ = run(tmp_path, 'modular', '--model', 'heavy-top', '--certificate', 'cos(', '--samples', '10')
    assert code == EXIT_USAGE

def test_modular_polar_certificate(tmp_path, model_files):
    path = os.path.join(model_files, 'polar_particle.yaml')
    code, output = run(tmp_path, 'modular', '--model', path, '--certificate', 'log(r) + 3', '--samples', '10')
    assert code == EXIT_OK
    assert read_json(output)['certificate']['max_residual'] < 1e-12

#####################################################
#                      VOLUME                       #
#####################################################

def test_volume_aff1_is_not_preserved(tmp_path):
    code, output = run(tmp_path, 'volume', '--model', 'aff1', '--expect-preserved', '--samples', '20',
                       '--trajectories', '2', '--t-final', '0.1', '--dt', '0.01', '--seed', '7')
    report = read_json(output)
    assert code == EXIT_EXPECTATION
    assert not report['preserved']
    points = sample_phase_points(get_model('aff1').algebroid, make_rng(7), 20, 1.)
    assert report['max_divergence'] == pytest.approx(max(abs(x.p[0]) for x in points), abs=1e-12)
    assert report['obstruction_max'] == pytest.approx(1., abs=1e-12)
    for entry in report['drift_reports']:
        assert entry['discrepancy'] < 1e-6

def test_volume_beanie_is_preserved(tmp_path):
    code, output = run(tmp_path, 'volume', '--model', 'beanie', '--expect-preserved', '--samples', '20',
                       '--trajectories', '2', '--t-final', '0.2', '--dt', '0.01')
    report = read_json(output)
    assert code == EXIT_OK
    assert report['preserved']
    assert report['obstruction_max'] < 1e-8
    for entry in report['drift_reports']:
        assert entry.get('escaped') or abs(entry['log_det_jacobian']) < 1e-8

def test_volume_heavy_top_reports_preserved_volume_drift(tmp_path):
    code, output = run(tmp_path, 'volume', '--model', 'heavy-top', '--samples', '10', '--trajectories', '2',
                       '--t-final', '0.5', '--dt', '0.01', '--momentum-scale', '0.1', '--expect-preserved')
    report = read_json(output)
    assert code == EXIT_OK
    for entry in report['drift_reports']:
        if entry.get('escaped'):
            continue
        # log det Y alone follows the area factor sin(theta)
        assert abs(entry['volume_log_det']) < 1e-6
        assert entry['volume_discrepancy'] < 1e-6

def test_volume_with_fiber_density(tmp_path):
    # exp(|p|^2 / 2) is not invariant under the oscillator flow
    code, output = run(tmp_path, 'volume', '--model', 'harmonic', '--sigma-tilde', 'p1^2/2', '--samples', '10',
                       '--trajectories', '1', '--t-final', '0.1', '--dt', '0.01', '--expect-preserved')
    report = read_json(output)
    assert code == EXIT_EXPECTATION
    assert report['sigma_tilde'] == 'p1^2/2'
    assert report['obstruction_max'] > 0.

def test_volume_without_expectation_always_succeeds(tmp_path):
    code, _ = run(tmp_path, 'volume', '--model', 'harmonic', '--sigma-tilde', 'q1 + 1', '--samples', '5',
                  '--trajectories', '0')
    assert code == EXIT_OK

#####################################################
#                    LIST-MODELS                    #
#####################################################

def test_list_models(tmp_path):
    code, output = run(tmp_path, 'list-models')
    catalog = read_json(output)
    assert code == EXIT_OK
    assert len(catalog) == 11
    assert catalog[5]['name'] == 'aff1'
    assert not catalog[5]['expected']['unimodular']

#####################################################
#                 REFERENCE OUTPUTS                 #
#####################################################

GOLDEN = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'golden')

@pytest.mark.parametrize('argv, golden', [
    (['validate', '--model', 'so3'], 'validate-so3.json'),
    (['simulate', '--model', 'harmonic', '--t-final', '0'], 'simulate-harmonic-t0.csv'),
    (['modular', '--model', 'aff1'], 'modular-aff1.json'),
    (['volume', '--model', 'free-particle', '--trajectories', '0'], 'volume-free-particle.json'),
    (['list-models'], 'list-models.json'),
])
def test_reference_outputs(tmp_path, argv, golden):
    code, output = run(tmp_path, *argv)
    assert code == EXIT_OK
    assert read_bytes(output) == read_bytes(os.path.join(GOLDEN, golden))

#####################################################
#                   DETERMINISM                     #
#####################################################

@pytest.mark.parametrize('argv', [
    ['validate', '--model', 'heavy-top', '--samples', '10'],
    ['simulate', '--model', 'beanie', '--t-final', '0.5', '--dt', '0.01', '--monitors', 'energy,casimir'],
    ['modular', '--model', 'heavy-top', '--samples', '10'],
    ['volume', '--model', 'heavy-top', '--samples', '10', '--trajectories', '2', '--t-final', '0.1', '--dt', '0.01'],
    ['list-models'],
])
def test_outputs_are_byte_identical(tmp_path, argv):
    first = run(tmp_path, *(argv + ['--seed', '3']), name='first')
    second = run(tmp_path, *(argv + ['--seed', '3']), name='second')
    assert first[0] == second[0] == EXIT_OK
    assert read_bytes(first[1]) == read_bytes(second[1])
