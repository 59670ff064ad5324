import sys
import logging
from contextlib import contextmanager

import numpy as np

from algebroid.errors import (ModelError, PreconditionError, NumericError, OutOfChartError,
                              TrajectoryEscapeError, CapabilityError)
from poisson.phase import phase_point

EXIT_OK = 0
EXIT_EXPECTATION = 1
EXIT_USAGE = 2
EXIT_NUMERIC = 3

def exit_code_for(error):
    """Map an exception raised while running a subcommand to the exit-code contract."""
    if isinstance(error, (NumericError, TrajectoryEscapeError, OutOfChartError)):
        return EXIT_NUMERIC
    if isinstance(error, (ModelError, PreconditionError, CapabilityError, ValueError)):
        return EXIT_USAGE
    return None

@contextmanager
def open_output(path):
    if not path:
        yield sys.stdout
    else:
        with open(path, 'w', newline='') as f:
            yield f
        logging.info("Output written to %s", path)

def parse_vector(text):
    try:
        return np.array([float(v) for v in text.split(',') if v.strip() != ''], dtype=float)
    except ValueError:
        raise PreconditionError("Cannot read a comma-separated vector from '{}'.".format(text))

def parse_points(text, base_dim):
    """'q1,q2;q1,q2' -> (k, m) array of base points."""
    points = [parse_vector(chunk) for chunk in text.split(';') if chunk.strip() != '']
    for q in points:
        if len(q) != base_dim:
            raise PreconditionError("Base point {} has {} coordinates, the model has {}.".format(
                q.tolist(), len(q), base_dim))
    return np.array(points, dtype=float).reshape(-1, base_dim)

def parse_phase_point(text, alg):
    """'q..,p..' -> validated PhasePoint."""
    x = parse_vector(text)
    m, n = alg.base_dim, alg.rank
    if len(x) != m + n:
        raise PreconditionError("--x0 needs {} values (q then p), got {}.".format(m + n, len(x)))
    if not alg.chart.contains(x[:m]):
        raise PreconditionError("--x0 base point {} is outside the chart {}.".format(x[:m].tolist(), alg.chart.domain))
    return phase_point(alg, x[:m], x[m:])

def point_dict(x):
    return {'q': x.q.tolist(), 'p': x.p.tolist()}
