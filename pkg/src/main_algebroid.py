import sys
import logging
import argparse
import multiprocessing as mp

from algebroid.errors import AlgebroidError
from models.catalog import load_model, MODEL_BUILDERS
from utils.general_utils import initialize_logger, close_logger
from utils.numeric_utils import make_rng

from cli import RUNNERS, run_list_models, exit_code_for, EXIT_USAGE

def unsigned_int(text):
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("expected an unsigned integer, got {}".format(text))
    return value

def positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("expected a positive integer, got {}".format(text))
    return value

def positive_float(text):
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError("expected a positive number, got {}".format(text))
    return value

def read_args(argv=None):
    common = argparse.ArgumentParser(add_help=False)
    add_arg = common.add_argument

    # RUN PARAMETERS
    add_arg('--seed', type=unsigned_int, default=0, help='seed of the Philox generator')
    add_arg('--output', default='', help='output file (stdout when empty)')
    add_arg('--artifact_path', default=None, help='directory for log.txt')
    add_arg('--nb_procs', type=int, default=1, help='worker processes (0 = all cores), capped by ALGEBROID_THREADS')
    add_arg('--verbose', action='store_true')

    model_arg = argparse.ArgumentParser(add_help=False)
    model_arg.add_argument('--model', required=True,
                           help='builtin name ({}) or path to a .json/.yaml model file'.format(', '.join(MODEL_BUILDERS)))

    parser = argparse.ArgumentParser(
        description='Hamiltonian dynamics on Lie algebroids in one chart.',
        formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    subparsers = parser.add_subparsers(dest='subcommand', metavar='subcommand')
    subparsers.required = True

    def add_subcommand(name, summary, with_model=True):
        parents = [common, model_arg] if with_model else [common]
        return subparsers.add_parser(name, help=summary, parents=parents,
                                     formatter_class=argparse.ArgumentDefaultsHelpFormatter)

    # VALIDATE
    sub = add_subcommand('validate', 'structure-equation residuals of a model')
    add_arg = sub.add_argument
    add_arg('--samples', type=positive_int, default=100, help='Halton points (plus as many random points)')
    add_arg('--threshold', type=positive_float, default=None, help='1e-8 analytic, 1e-5 finite differences')

    # SIMULATE
    sub = add_subcommand('simulate', 'integrate Hamilton equations, CSV trajectory')
    add_arg = sub.add_argument
    add_arg('--x0', default='', help='initial point q...,p... (model default when empty)')
    add_arg('--t-final', dest='t_final', type=float, default=1.)
    add_arg('--dt', type=positive_float, default=1e-3, help='fixed step, or initial step when adaptive')
    add_arg('--method', choices=['rk4_fixed', 'rkf45_adaptive'], default='rk4_fixed')
    add_arg('--rtol', type=positive_float, default=None, help='implies rkf45_adaptive')
    add_arg('--atol', type=positive_float, default=None, help='implies rkf45_adaptive')
    add_arg('--dt-min', dest='dt_min', type=positive_float, default=1e-12)
    add_arg('--dt-max', dest='dt_max', type=positive_float, default=0.1)
    add_arg('--record-stride', dest='record_stride', type=int, default=1)
    add_arg('--monitors', default='energy', help='comma-separated: energy, casimir, divergence')

    # MODULAR
    sub = add_subcommand('modular', 'modular section and certificate check, JSON')
    add_arg = sub.add_argument
    add_arg('--points', default='', help="base points 'q1,q2;q1,q2' (model default when empty)")
    add_arg('--certificate', default=None, help='sigma(q) expression to verify')
    add_arg('--samples', type=positive_int, default=100, help='random points of the certificate check')

    # VOLUME
    sub = add_subcommand('volume', 'divergence, volume drift and zero-section obstruction, JSON')
    add_arg = sub.add_argument
    add_arg('--sigma-tilde', dest='sigma_tilde', default=None,
            help='log-density sigma~(q, p1..pn) of Phi = exp(sigma~) nu ^ Lambda^G')
    add_arg('--t-final', dest='t_final', type=float, default=1.)
    add_arg('--dt', type=positive_float, default=1e-3)
    add_arg('--samples', type=positive_int, default=100, help='random phase points for the divergence')
    add_arg('--trajectories', type=unsigned_int, default=4, help='drift trajectories started from the first samples')
    add_arg('--momentum-scale', dest='momentum_scale', type=positive_float, default=1.)
    add_arg('--threshold', type=positive_float, default=1e-8)
    add_arg('--expect-preserved', dest='expect_preserved', action='store_true')

    # LIST-MODELS
    add_subcommand('list-models', 'catalog of builtin models, JSON', with_model=False)

    return parser.parse_args(argv)

def main(argv=None):
    try:
        args = read_args(argv)
    except SystemExit as e:
        return e.code

    initialize_logger(args.artifact_path, level='DEBUG' if args.verbose else 'INFO')
    try:
        logging.info("====args====\n%s", args)
        if args.subcommand == 'list-models':
            return run_list_models(args)

        bundle = load_model(args.model, validate=args.subcommand != 'validate')
        return RUNNERS[args.subcommand](args, bundle, make_rng(args.seed))
    except (AlgebroidError, ValueError, OSError) as e:
        code = exit_code_for(e) if not isinstance(e, OSError) else EXIT_USAGE
        if code is None:
            raise
        logging.error("%s: %s", type(e).__name__, e)
        return code
    finally:
        close_logger()

if __name__ == '__main__':
    mp.set_start_method('fork', force=True)
    sys.exit(main())
