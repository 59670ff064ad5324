from .runge_kutta import rk4_step, rkf45_step, error_norm, step_factor
from .trajectory import (IntegratorConfig, Trajectory, Monitor, integrate, energy_monitor, casimir_monitor,
                         divergence_monitor, METHODS)
