"""
Model files (JSON or YAML):

    {"name": "...",
     "builtin": "so3", "params": {...}}

or an explicit chart model

    {"name": "...",
     "base_dim": m, "rank": n, "coord_names": [...], "domain": [[lo, hi], ...],   # null = unbounded
     "anchor": [[expr, ...], ...],                 # m x n
     "structure": [[[expr, ...], ...], ...],       # C[gamma][alpha][beta]
     "hamiltonian": {"cometric": [[expr, ...], ...], "potential": expr},
     "builtin_hamiltonian": "kinetic",             # instead of hamiltonian: G = identity, V = 0
     "volume": {"base_log_density": expr, "fiber_log_density": expr, "certificate_sigma": expr},
     "casimirs": {"name": expr in q and p1..pn},
     "expected": {"unimodular": bool},
     "x0": {"q": [...], "p": [...]}}
"""
import os
import logging

import numpy as np
import yaml

from algebroid.chart import BaseChart
from algebroid.algebroid import ChartedAlgebroid
from algebroid.fields import BaseField, zero_field
from algebroid.errors import ModelFileError, ModelError
from poisson.phase import ScalarPhaseField
from poisson.hamiltonian import MechanicalHamiltonian
from modular.volumes import VolumeSpec, PhaseDensity, UnimodularityCertificate
from utils.expression_utils import (FUNCTIONS, CONSTANTS, make_symbols, parse_expression, parse_array, lambdify,
                                    derivative_array)

from .bundle import ModelBundle

#####################################################
#                  FIELD COMPILERS                  #
#####################################################

def momentum_names(rank):
    return ['p{}'.format(a + 1) for a in range(rank)]

def _compile_array(entries, symbols, variables, shape, what):
    tree = parse_array(entries, symbols)
    if tuple(tree.shape) != tuple(shape):
        raise ModelFileError("{} has shape {}, expected {}.".format(what, tuple(tree.shape), tuple(shape)))
    constant = not any(e.free_symbols for e in tree.reshape(len(tree))) if len(tree) else True
    value = lambdify(variables, tree)
    jac = lambdify(variables, derivative_array(tree, variables)) if variables and not constant else None
    return value, jac, constant

def base_field_from_expression(text, coord_names, name='f'):
    """BaseField with symbolic gradient and hessian."""
    symbols = make_symbols(coord_names)
    variables = [symbols[c] for c in coord_names]
    expr = parse_expression(text, symbols)
    m = len(variables)
    if m == 0:
        value = float(expr)
        return BaseField(lambda q: value, lambda q: np.zeros(0), lambda q: np.zeros((0, 0)), name=name)
    grad = derivative_array(expr, variables)
    return BaseField(lambdify(variables, expr),
                     lambdify(variables, grad),
                     lambdify(variables, derivative_array(grad, variables)),
                     name=name)

def phase_field_from_expression(text, coord_names, rank, name='F', alg=None):
    """ScalarPhaseField in (q, p1..pn) with symbolic gradient and hessian, checked on the chart of alg."""
    p_names = momentum_names(rank)
    clash = set(coord_names) & set(p_names)
    if clash:
        raise ModelFileError("Coordinate names {} clash with momentum names.".format(sorted(clash)))
    names = list(coord_names) + p_names
    symbols = make_symbols(names)
    variables = [symbols[c] for c in names]
    expr = parse_expression(text, symbols)
    grad = derivative_array(expr, variables)

    value = lambdify(variables, expr)
    gradient = lambdify(variables, grad)
    hessian = lambdify(variables, derivative_array(grad, variables))
    return ScalarPhaseField(lambda q, p: value(np.concatenate([q, p])),
                            lambda q, p: gradient(np.concatenate([q, p])),
                            lambda q, p: hessian(np.concatenate([q, p])),
                            name=name, alg=alg)

def density_from_expression(text, alg):
    """PhaseDensity sigma~(q, p) with its fiber Hessian at p = 0 taken symbolically."""
    field = phase_field_from_expression(text, alg.chart.coord_names, alg.rank, name='sigma_tilde', alg=alg)
    m, n = alg.base_dim, alg.rank
    return PhaseDensity(field, fiber_hessian=lambda q: field.hessian(q, np.zeros(n))[m:, m:])

#####################################################
#                     LOADING                       #
#####################################################

def read_model_file(path):
    if not os.path.isfile(path):
        raise ModelFileError("Model file {} not found.".format(path))
    with open(path, 'r') as f:
        try:
            spec = yaml.safe_load(f)
        except yaml.YAMLError as e:
            raise ModelFileError("Cannot parse model file {}: {}".format(path, e))
    if not isinstance(spec, dict):
        raise ModelFileError("Model file {} must hold a mapping at top level.".format(path))
    return spec

def load_model_file(path, validate=True):
    spec = read_model_file(path)
    name = spec.get('name', os.path.splitext(os.path.basename(path))[0])
    logging.info("Loading model '%s' from %s", name, path)
    if 'builtin' in spec:
        from .catalog import get_model
        return get_model(spec['builtin'], name=name, **spec.get('params', {}))
    return model_from_spec(spec, name, validate)

def _require(spec, key):
    if key not in spec:
        raise ModelFileError("Model file is missing '{}'.".format(key))
    return spec[key]

def _domain(spec, m):
    domain = spec.get('domain', [[None, None]] * m)
    if len(domain) != m:
        raise ModelFileError("Domain has {} entries for {} coordinates.".format(len(domain), m))
    lower = [-np.inf if lo is None else float(lo) for lo, _ in domain]
    upper = [np.inf if hi is None else float(hi) for _, hi in domain]
    return lower, upper

def _hamiltonian(spec, name, coord_names, symbols, variables, n):
    if ('hamiltonian' in spec) == ('builtin_hamiltonian' in spec):
        raise ModelFileError("Model file needs exactly one of 'hamiltonian' and 'builtin_hamiltonian'.")
    if 'builtin_hamiltonian' in spec:
        kind = spec['builtin_hamiltonian']
        if kind != 'kinetic':
            raise ModelFileError("Builtin hamiltonian {} not recognized.".format(kind))
        identity = np.eye(n)
        return MechanicalHamiltonian(lambda q: identity, zero_field(len(coord_names), 'V'), constant_cometric=True,
                                     name='H_{}'.format(name))

    ham = spec['hamiltonian']
    cometric, cometric_jac, cometric_const = _compile_array(_require(ham, 'cometric'), symbols, variables,
                                                            (n, n), 'cometric')
    potential = base_field_from_expression(ham.get('potential', '0'), coord_names, name='V')
    return MechanicalHamiltonian(cometric, potential, cometric_jac=cometric_jac,
                                 constant_cometric=cometric_const, name='H_{}'.format(name))

def model_from_spec(spec, name='model', validate=True):
    m = int(_require(spec, 'base_dim'))
    n = int(_require(spec, 'rank'))
    coord_names = list(spec.get('coord_names', ['q{}'.format(i + 1) for i in range(m)]))
    if len(coord_names) != m:
        raise ModelFileError("coord_names has {} entries, base_dim is {}.".format(len(coord_names), m))
    reserved = sorted(set(coord_names) & (set(FUNCTIONS) | set(CONSTANTS)))
    if reserved:
        raise ModelFileError("Coordinate names {} are reserved by the expression grammar.".format(reserved))
    symbols = make_symbols(coord_names)
    variables = [symbols[c] for c in coord_names]

    try:
        chart = BaseChart(coord_names, *_domain(spec, m))
    except ModelError as e:
        raise ModelFileError(str(e))

    if m:
        anchor, anchor_jac, anchor_const = _compile_array(_require(spec, 'anchor'), symbols, variables, (m, n), 'anchor')
    else:
        anchor, anchor_jac, anchor_const = (lambda q: np.zeros((0, n))), None, True
    structure, structure_jac, structure_const = _compile_array(_require(spec, 'structure'), symbols, variables,
                                                               (n, n, n), 'structure')
    constant = anchor_const and structure_const
    alg = ChartedAlgebroid(chart, n, anchor, structure,
                           anchor_jac=None if constant else (anchor_jac or (lambda q: np.zeros((m, n, m)))),
                           structure_jac=None if constant else (structure_jac or (lambda q: np.zeros((n, n, n, m)))),
                           name=name,
                           constant=constant)

    mech = _hamiltonian(spec, name, coord_names, symbols, variables, n)

    vol_spec = spec.get('volume', {})
    base = base_field_from_expression(vol_spec['base_log_density'], coord_names, 'sigma_nu') \
        if m and 'base_log_density' in vol_spec else None
    fiber = base_field_from_expression(vol_spec['fiber_log_density'], coord_names, 'lambda') \
        if 'fiber_log_density' in vol_spec else None
    volume = VolumeSpec(m, base, fiber)

    certificate = None
    if 'certificate_sigma' in vol_spec:
        certificate = UnimodularityCertificate(base_field_from_expression(vol_spec['certificate_sigma'], coord_names,
                                                                          'sigma'))

    casimirs = [phase_field_from_expression(text, coord_names, n, name=key, alg=alg)
                for key, text in spec.get('casimirs', {}).items()]
    expected = {'unimodular': certificate is not None, 'casimirs': casimirs}
    expected.update({k: v for k, v in spec.get('expected', {}).items() if k == 'unimodular'})

    x0 = spec.get('x0')
    default_x0 = (x0.get('q', []), x0.get('p', [])) if x0 else None
    return ModelBundle(name, alg, mech, volume,
                       certificate=certificate,
                       params={'source': 'file'},
                       expected=expected,
                       card=spec.get('card', 'Model read from file.'),
                       default_x0=default_x0,
                       validate=validate)
