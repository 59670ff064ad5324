import logging

import numpy as np

from algebroid.structure import max_structure_residuals
from utils.general_utils import dump_json

from .common import EXIT_OK, EXIT_EXPECTATION, open_output

ANALYTIC_THRESHOLD = 1e-8
FD_THRESHOLD = 1e-5

def run_validate(args, bundle, rng):
    alg = bundle.algebroid
    if alg.base_dim:
        points = np.concatenate([alg.chart.grid(args.samples), alg.chart.sample(rng, args.samples)])
    else:
        points = np.zeros((1, 0))
    max_anchor, max_jacobi = max_structure_residuals(alg, points)

    threshold = args.threshold
    if threshold is None:
        threshold = ANALYTIC_THRESHOLD if alg.has_analytic_derivatives else FD_THRESHOLD
    passed = max(max_anchor, max_jacobi) < threshold

    report = {
        'model': bundle.name,
        'max_anchor_residual': max_anchor,
        'max_jacobi_residual': max_jacobi,
        'grid_size': len(points),
        'threshold': threshold,
        'passed': passed,
    }
    with open_output(args.output) as f:
        dump_json(report, f)

    if not passed:
        logging.error("Structure residuals of '%s' exceed %.1e", bundle.name, threshold)
        return EXIT_EXPECTATION
    return EXIT_OK
