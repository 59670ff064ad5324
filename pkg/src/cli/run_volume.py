import logging

import numpy as np

from algebroid.errors import TrajectoryEscapeError
from algebroid.fields import BaseField, zero_field
from poisson.phase import PhasePoint
from modular.volumes import zero_density, metric_fiber_density
from models.model_file import density_from_expression
from volume.divergence import divergence
from volume.drift import drift_batch
from volume.obstruction import zero_section_obstruction
from utils.general_utils import dump_json, get_nb_procs

from .common import EXIT_OK, EXIT_EXPECTATION, open_output, point_dict

NB_OBSTRUCTION_POINTS = 50

def volume_under_study(args, bundle):
    """(VolumeSpec, PhaseDensity, sigma) for Phi = exp(sigma~) nu ^ Lambda^G."""
    alg, mech = bundle.algebroid, bundle.hamiltonian
    if args.sigma_tilde is not None:
        vol = bundle.volume.with_fiber(metric_fiber_density(mech, alg.base_dim))
        density = density_from_expression(args.sigma_tilde, alg)
        sigma = BaseField(lambda q: density.zero_section_value(q, alg.rank), name='sigma~(0)')
        return vol, density, sigma
    if bundle.certificate is not None:
        vol, density = bundle.preserved_volume()
        return vol, density, bundle.certificate.sigma
    vol = bundle.volume.with_fiber(metric_fiber_density(mech, alg.base_dim))
    return vol, zero_density(alg), zero_field(alg.base_dim, 'sigma')

def sample_phase_points(alg, rng, n, scale):
    qs = alg.chart.sample(rng, n) if alg.base_dim else np.zeros((n, 0))
    ps = rng.uniform(-scale, scale, (n, alg.rank))
    return [PhasePoint(q, p) for q, p in zip(qs, ps)]

def drift_entry(x0, report):
    entry = {'x0': point_dict(x0)}
    if isinstance(report, TrajectoryEscapeError):
        entry.update(escaped=True, exit_time=report.exit_time)
    elif isinstance(report, Exception):
        raise report
    else:
        entry.update(report._asdict())
    return entry

def run_volume(args, bundle, rng):
    alg, mech = bundle.algebroid, bundle.hamiltonian
    vol, density, sigma = volume_under_study(args, bundle)
    points = sample_phase_points(alg, rng, args.samples, args.momentum_scale)

    max_divergence = max(abs(divergence(alg, mech, vol, density, x).divergence) for x in points)

    obstruction_max = 0.
    base_points = [x.q for x in points[:NB_OBSTRUCTION_POINTS]] if alg.base_dim else [np.zeros(0)]
    for q in base_points:
        R = zero_section_obstruction(alg, mech, vol, density, sigma, q)
        obstruction_max = max(obstruction_max, float(np.max(np.abs(R))))

    starts = points[:args.trajectories]
    reports = drift_batch(bundle, starts, args.t_final, args.dt,
                          nb_procs=get_nb_procs(args.nb_procs), verbose=args.verbose, keep_errors=True,
                          volume=(vol, density))
    drift_reports = [drift_entry(x0, r) for x0, r in zip(starts, reports)]

    preserved = max_divergence < args.threshold
    report = {
        'model': bundle.name,
        'sigma_tilde': args.sigma_tilde,
        'samples': len(points),
        'max_divergence': max_divergence,
        'obstruction_max': obstruction_max,
        'drift_reports': drift_reports,
        'threshold': args.threshold,
        'preserved': preserved,
    }
    with open_output(args.output) as f:
        dump_json(report, f)

    if args.expect_preserved and not preserved:
        logging.error("Max divergence %.3e of '%s' is not below %.1e", max_divergence, bundle.name, args.threshold)
        return EXIT_EXPECTATION
    return EXIT_OK
