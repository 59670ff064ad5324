import logging

from integrate.trajectory import IntegratorConfig, integrate, energy_monitor, casimir_monitor, divergence_monitor
from modular.volumes import zero_density
from utils.general_utils import rows_to_csv

from .common import EXIT_OK, open_output, parse_phase_point

MONITORS = ('energy', 'casimir', 'divergence')

def build_monitors(names, bundle):
    monitors = []
    for name in names:
        if name == 'energy':
            monitors.append(energy_monitor(bundle.hamiltonian))
        elif name == 'casimir':
            if not bundle.casimirs:
                logging.warning("Model '%s' declares no Casimirs", bundle.name)
            monitors += [casimir_monitor(c.name, c) for c in bundle.casimirs]
        elif name == 'divergence':
            preserved = bundle.preserved_volume()
            vol, density = preserved if preserved is not None else (bundle.volume, zero_density(bundle.algebroid))
            monitors.append(divergence_monitor(bundle.algebroid, bundle.hamiltonian, vol, density))
        else:
            raise ValueError("Monitor {} not recognized.".format(name))
    return monitors

def integrator_config(args):
    adaptive = args.method == 'rkf45_adaptive' or args.rtol is not None or args.atol is not None
    kwargs = dict(t_final=args.t_final, dt=args.dt, record_stride=args.record_stride)
    if adaptive:
        kwargs.update(method='rkf45_adaptive', dt_min=args.dt_min, dt_max=args.dt_max)
        if args.rtol is not None:
            kwargs['rtol'] = args.rtol
        if args.atol is not None:
            kwargs['atol'] = args.atol
    return IntegratorConfig(**kwargs)

def run_simulate(args, bundle, rng):
    alg = bundle.algebroid
    x0 = parse_phase_point(args.x0, alg) if args.x0 else bundle.default_x0
    cfg = integrator_config(args)
    names = [n.strip() for n in args.monitors.split(',') if n.strip()]
    logging.info("Integrating '%s' from q=%s p=%s with %s", bundle.name, x0.q.tolist(), x0.p.tolist(), cfg)

    traj = integrate(alg, bundle.hamiltonian, x0, cfg, build_monitors(names, bundle))
    if traj.escaped:
        logging.warning("Trajectory left the chart at t = %.6g; output is truncated", traj.escape_time)

    with open_output(args.output) as f:
        rows_to_csv(traj.header(alg.base_dim, alg.rank), traj.rows(), f)
    return EXIT_OK
