import logging

import numpy as np

from modular.modular_section import (modular_section, modular_character, modular_cocycle_residual,
                                     verify_certificate)
from modular.volumes import UnimodularityCertificate
from models.model_file import base_field_from_expression
from utils.general_utils import dump_json

from .common import EXIT_OK, EXIT_EXPECTATION, open_output, parse_points

def run_modular(args, bundle, rng):
    alg = bundle.algebroid
    vol = bundle.volume
    m = alg.base_dim

    if args.points:
        points = parse_points(args.points, m)
    else:
        points = bundle.default_x0.q.reshape(1, m)

    sections = []
    cocycle_max = 0.
    for q in points:
        M = modular_section(alg, vol, q)
        cocycle_max = max(cocycle_max, float(np.max(np.abs(modular_cocycle_residual(alg, vol, q)))))
        sections.append({'q': M.base_point.tolist(), 'M': M.components.tolist()})

    report = {
        'model': bundle.name,
        'points': sections,
        'max_cocycle_residual': cocycle_max,
        'character': modular_character(alg).tolist() if m == 0 else None,
    }

    given = args.certificate is not None
    if given:
        certificate = UnimodularityCertificate(base_field_from_expression(args.certificate, alg.chart.coord_names, 'sigma'))
    else:
        certificate = bundle.certificate

    verified = True
    if certificate is not None:
        max_residual, verified, threshold = verify_certificate(alg, vol, certificate, rng, samples=args.samples)
        report['certificate'] = {
            'sigma': args.certificate if given else certificate.sigma.name,
            'max_residual': max_residual,
            'threshold': threshold,
            'verified': verified,
        }
    else:
        report['certificate'] = None

    with open_output(args.output) as f:
        dump_json(report, f)

    if given and not verified:
        logging.error("Certificate sigma = %s does not verify for '%s'", args.certificate, bundle.name)
        return EXIT_EXPECTATION
    return EXIT_OK
