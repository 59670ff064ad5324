import numpy as np

from algebroid.errors import NumericError

#####################################################
#                   BUTCHER TABLES                  #
#####################################################

# Runge-Kutta-Fehlberg 4(5): six stages, 4th order weights B4 and 5th order weights B5
RKF45_A = [
    [],
    [      1/4],
    [     3/32,       9/32],
    [1932/2197, -7200/2197,  7296/2197],
    [  439/216,         -8,   3680/513, -845/4104],
    [    -8/27,          2, -3554/2565, 1859/4104, -11/40],
    ]
RKF45_B4 = [25/216, 0., 1408/2565, 2197/4104, -1/5, 0.]
RKF45_B5 = [16/135, 0., 6656/12825, 28561/56430, -9/50, 2/55]

SAFETY = 0.9
MIN_FACTOR = 0.2
MAX_FACTOR = 5.

def _stage(rhs, y, what):
    k = np.asarray(rhs(y), dtype=float)
    if not np.all(np.isfinite(k)):
        raise NumericError("Non-finite {} stage.".format(what))
    return k

def rk4_step(rhs, x, dt):
    """Classical 4-stage Runge-Kutta update of x' = rhs(x)."""
    x = np.asarray(x, dtype=float)
    k1 = _stage(rhs, x, 'RK4')
    k2 = _stage(rhs, x + 0.5 * dt * k1, 'RK4')
    k3 = _stage(rhs, x + 0.5 * dt * k2, 'RK4')
    k4 = _stage(rhs, x + dt * k3, 'RK4')
    return x + dt / 6. * (k1 + 2. * k2 + 2. * k3 + k4)

def rkf45_step(rhs, x, dt):
    """
    One Fehlberg step. Returns (x5, err) with x5 the 5th order solution
    (propagated, local extrapolation) and err = x5 - x4 the embedded error estimate.
    """
    x = np.asarray(x, dtype=float)
    ks = []
    for a in RKF45_A:
        y = x + dt * sum(aj * kj for aj, kj in zip(a, ks)) if a else x
        ks.append(_stage(rhs, y, 'RKF45'))
    x4 = x + dt * sum(b * k for b, k in zip(RKF45_B4, ks))
    x5 = x + dt * sum(b * k for b, k in zip(RKF45_B5, ks))
    return x5, x5 - x4

def error_norm(err, x, x_new, rtol, atol):
    scale = atol + rtol * np.maximum(np.abs(x), np.abs(x_new))
    return float(np.max(np.abs(err) / scale)) if len(err) else 0.

def step_factor(err_norm):
    if err_norm == 0.:
        return MAX_FACTOR
    return min(MAX_FACTOR, max(MIN_FACTOR, SAFETY * err_norm ** (-0.2)))
