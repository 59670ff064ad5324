import math
import logging
from collections import OrderedDict

import numpy as np

from algebroid.errors import OutOfChartError, StiffnessError
from poisson.phase import to_array, from_array
from poisson.bivector import HamiltonianFlow

from .runge_kutta import rk4_step, rkf45_step, error_norm, step_factor

METHODS = ('rk4_fixed', 'rkf45_adaptive')

#####################################################
#                   CONFIGURATION                   #
#####################################################

class IntegratorConfig(object):
    def __init__(self,
                 method='rk4_fixed',
                 t_final=1.,
                 dt=1e-3,
                 rtol=1e-8,
                 atol=1e-10,
                 dt_min=1e-12,
                 dt_max=0.1,
                 record_stride=1):
        if method not in METHODS:
            raise ValueError("Integration method {} not recognized.".format(method))
        if t_final < 0:
            raise ValueError("t_final must be >= 0, got {}.".format(t_final))
        if dt <= 0 or dt_min <= 0 or dt_max <= 0 or dt_min > dt_max:
            raise ValueError("Step bounds must be positive with dt_min <= dt_max.")
        if rtol <= 0 or atol <= 0:
            raise ValueError("rtol and atol must be positive.")
        if int(record_stride) < 1:
            raise ValueError("record_stride must be >= 1.")
        self.method = method
        self.t_final = float(t_final)
        self.dt = float(dt)
        self.rtol = float(rtol)
        self.atol = float(atol)
        self.dt_min = float(dt_min)
        self.dt_max = float(dt_max)
        self.record_stride = int(record_stride)

    def __repr__(self):
        return "IntegratorConfig({})".format(', '.join('{}={}'.format(k, v) for k, v in vars(self).items()))

#####################################################
#                     MONITORS                      #
#####################################################

class Monitor(object):
    """
    Scalar evaluated along a trajectory. With accumulate=True the value is
    integrated in time (trapezoid rule over every step) instead of sampled.
    """
    def __init__(self, name, func, accumulate=False):
        self.name = name
        self.func = func
        self.accumulate = accumulate

def energy_monitor(H):
    return Monitor('energy', lambda x: H(x.q, x.p))

def casimir_monitor(name, field):
    return Monitor(name, lambda x: field(x.q, x.p))

def divergence_monitor(alg, H, vol, density):
    from volume.divergence import divergence
    return Monitor('divergence', lambda x: divergence(alg, H, vol, density, x).divergence, accumulate=True)

class Trajectory(object):
    def __init__(self, times, states, monitors, escaped=False, escape_time=None):
        self.times = np.asarray(times, dtype=float)
        self.states = list(states)
        self.monitors = monitors
        self.escaped = escaped
        self.escape_time = escape_time

    @property
    def final_state(self):
        return self.states[-1]

    def header(self, base_dim, rank):
        return (['t'] + ['q_{}'.format(i + 1) for i in range(base_dim)] + ['p_{}'.format(a + 1) for a in range(rank)]
                + list(self.monitors.keys()))

    def rows(self):
        for k, (t, x) in enumerate(zip(self.times, self.states)):
            yield [t] + list(x.q) + list(x.p) + [values[k] for values in self.monitors.values()]

    def __len__(self):
        return len(self.times)

#####################################################
#                    INTEGRATION                    #
#####################################################

class _Recorder(object):
    def __init__(self, monitors):
        self.monitors = list(monitors)
        self.times, self.states = [], []
        self.values = OrderedDict((mon.name, []) for mon in self.monitors)
        self.integrals = [0.] * len(self.monitors)
        self.last = None

    def advance(self, x, dt):
        current = [mon.func(x) for mon in self.monitors]
        if self.last is not None:
            for i, mon in enumerate(self.monitors):
                if mon.accumulate:
                    self.integrals[i] += 0.5 * dt * (self.last[i] + current[i])
        self.last = current

    def record(self, t, x):
        self.times.append(t)
        self.states.append(x)
        for i, mon in enumerate(self.monitors):
            self.values[mon.name].append(self.integrals[i] if mon.accumulate else self.last[i])

    def trajectory(self, escaped=False, escape_time=None):
        monitors = OrderedDict((name, np.array(v)) for name, v in self.values.items())
        return Trajectory(self.times, self.states, monitors, escaped, escape_time)

def integrate(alg, H, x0, cfg, monitors=()):
    """
    Integrate Hamilton's equations x' = X_H(x) from x0 over [0, cfg.t_final].
    H is a MechanicalHamiltonian or a ScalarPhaseField. Leaving the chart
    truncates the trajectory and sets its escape flag.
    """
    rhs = HamiltonianFlow(alg, H).rhs()
    chart = alg.chart
    recorder = _Recorder(monitors)
    x = to_array(x0)
    t, step = 0., 0

    recorder.advance(x0, 0.)
    recorder.record(0., x0)
    if cfg.t_final == 0.:
        return recorder.trajectory()

    if cfg.method == 'rk4_fixed':
        nb_steps = int(math.ceil(cfg.t_final / cfg.dt - 1e-9))
        h = cfg.dt
    else:
        h = min(cfg.dt, cfg.dt_max)

    while t < cfg.t_final:
        last = h >= cfg.t_final - t
        h = min(h, cfg.t_final - t)
        try:
            if cfg.method == 'rk4_fixed':
                x_new = rk4_step(rhs, x, h)
                factor = 1.
            else:
                x_new, err = rkf45_step(rhs, x, h)
                err = error_norm(err, x, x_new, cfg.rtol, cfg.atol)
                factor = step_factor(err)
                if err > 1.:
                    h *= factor
                    if h < cfg.dt_min:
                        raise StiffnessError("Step size underflow at t = {:.6g} (dt = {:.3e}).".format(t, h), t, h)
                    continue
        except OutOfChartError:
            logging.info("Stage left the chart within t = %.6g + %.3g; truncating trajectory", t, h)
            return recorder.trajectory(escaped=True, escape_time=t + h)

        if not chart.contains(x_new[:alg.base_dim]):
            logging.info("Trajectory left the chart at t = %.6g; truncating", t + h)
            return recorder.trajectory(escaped=True, escape_time=t + h)

        step += 1
        t_prev = t
        if cfg.method == 'rk4_fixed':
            t = cfg.t_final if step == nb_steps else step * cfg.dt
        else:
            t = cfg.t_final if last else t + h
            h = min(h * factor, cfg.dt_max)
        x = x_new
        state = from_array(alg, x)
        recorder.advance(state, t - t_prev)
        if step % cfg.record_stride == 0 or t >= cfg.t_final:
            recorder.record(t, state)

    return recorder.trajectory()
