import logging
import multiprocessing as mp
from collections import namedtuple

import numpy as np
from scipy.linalg import lu_factor
from tqdm import tqdm

from algebroid.errors import AlgebroidError, OutOfChartError, NumericError, TrajectoryEscapeError
from poisson.phase import PhasePoint, to_array, from_array
from poisson.bivector import HamiltonianFlow
from integrate.runge_kutta import rk4_step

VolumeDriftReport = namedtuple('VolumeDriftReport',
                               ['t_final', 'log_det_jacobian', 'integrated_divergence', 'discrepancy',
                                'volume_log_det', 'integrated_volume_divergence', 'volume_discrepancy'])

def _log_density(vol, density):
    """S(x) = sigma~(q, p) + sigma_nu(q) + lambda(q), Phi = exp(S) dq dp."""
    def value(x):
        return density.sigma_tilde(x.q, x.p) + (vol.total_log_density(x.q) if len(x.q) else 0.)

    def gradient(x):
        grad = np.array(density.sigma_tilde.gradient(x.q, x.p), dtype=float)
        grad[:len(x.q)] += vol.total_gradient(x.q)
        return grad
    return value, gradient

def _variational_rhs(flow, size, density_gradient):
    # z = (x, Y, s, s_phi) with Y' = J(x) Y, s' = tr J(x) and s_phi' = tr J(x) + X(S)
    m = flow.alg.base_dim

    def rhs(z):
        x = PhasePoint(z[:m], z[m:size])
        X, J = flow.field_and_jacobian(x)
        Y = z[size:size + size * size].reshape(size, size)
        div = np.trace(J)
        full = div if density_gradient is None else div + X.dot(density_gradient(x))
        return np.concatenate([X, J.dot(Y).ravel(), [div, full]])
    return rhs

def _signed_log_det(Y, t_final):
    lu, piv = lu_factor(Y)
    diag = np.diag(lu)
    # each row swap flips the sign of det
    sign = np.prod(np.sign(diag)) * (-1) ** int(np.sum(piv != np.arange(len(Y))))
    if sign <= 0:
        raise NumericError("Variational matrix has non-positive determinant at t = {:.6g}.".format(t_final))
    return float(np.sum(np.log(np.abs(diag))))

def jacobian_log_det(alg, H, x0, t_final, dt, vol=None, density=None):
    """
    Lock-step RK4 on the flow, its variational equations and the running
    divergences. Returns log det Y(t_final) next to the coordinate divergence
    quadrature over the same discrete trajectory.

    With a volume Phi = exp(sigma~) nu ^ Lambda (vol and density), the drift of
    Phi itself is reported too: log det Y + S(x_T) - S(x_0), against the
    quadrature of the divergence of X_H with respect to Phi.
    """
    if t_final < 0 or dt <= 0:
        raise ValueError("Need t_final >= 0 and dt > 0.")
    if t_final == 0:
        return VolumeDriftReport(0., 0., 0., 0., 0., 0., 0.)
    if (vol is None) != (density is None):
        raise ValueError("A drift volume needs both vol and density.")

    size = alg.base_dim + alg.rank
    log_density, density_gradient = _log_density(vol, density) if vol is not None else (None, None)
    rhs = _variational_rhs(HamiltonianFlow(alg, H), size, density_gradient)
    z = np.concatenate([to_array(x0), np.eye(size).ravel(), [0., 0.]])

    nb_steps = int(np.ceil(t_final / dt - 1e-9))
    t = 0.
    for step in range(1, nb_steps + 1):
        h = t_final - t if step == nb_steps else dt
        try:
            z = rk4_step(rhs, z, h)
        except OutOfChartError:
            raise TrajectoryEscapeError("Trajectory left the chart before t = {:.6g}.".format(t + h), t + h)
        t = t_final if step == nb_steps else step * dt
        if not alg.chart.contains(z[:alg.base_dim]):
            raise TrajectoryEscapeError("Trajectory left the chart at t = {:.6g}.".format(t), t)

    log_det = _signed_log_det(z[size:size + size * size].reshape(size, size), t_final)
    integrated, integrated_volume = float(z[-2]), float(z[-1])
    volume_log_det = log_det
    if log_density is not None:
        volume_log_det += log_density(from_array(alg, z[:size])) - log_density(x0)
    return VolumeDriftReport(t_final, log_det, integrated, abs(log_det - integrated),
                             volume_log_det, integrated_volume, abs(volume_log_det - integrated_volume))

#####################################################
#                  PARALLEL BATCHES                 #
#####################################################

class DriftWorker(mp.Process):
    def __init__(self, bundle, t_final, dt, volume, task_queue, result_queue):
        super(DriftWorker, self).__init__()
        self.task_queue = task_queue
        self.result_queue = result_queue

        self.bundle = bundle
        self.t_final = t_final
        self.dt = dt
        self.volume = volume

    def run(self):
        # input:
        ## None:            kill
        ## (index, x0):     trajectory id, initial phase point
        #
        # output:
        ## (index, report): VolumeDriftReport, or the AlgebroidError raised
        proc_name = self.name
        while True:
            next_task = self.task_queue.get()
            if next_task is None:
                # Poison pill means shutdown
                logging.debug('%s: Exiting', proc_name)
                self.task_queue.task_done()
                break

            index, x0 = next_task
            try:
                report = jacobian_log_det(self.bundle.algebroid, self.bundle.hamiltonian, x0, self.t_final, self.dt,
                                          *self.volume)
            except AlgebroidError as e:
                report = e
            self.result_queue.put((index, report))
            self.task_queue.task_done()

def _drift_serial(bundle, initial_points, t_final, dt, volume, verbose):
    reports = []
    for x0 in tqdm(initial_points, desc='trajectories', disable=not verbose):
        try:
            reports.append(jacobian_log_det(bundle.algebroid, bundle.hamiltonian, x0, t_final, dt, *volume))
        except AlgebroidError as e:
            reports.append(e)
    return reports

def _drift_parallel(bundle, initial_points, t_final, dt, volume, nb_procs, verbose):
    tasks = mp.JoinableQueue()
    results = mp.Queue()
    workers = [DriftWorker(bundle, t_final, dt, volume, tasks, results) for _ in range(nb_procs)]
    for w in workers:
        w.start()

    for i, x0 in enumerate(initial_points):
        tasks.put((i, x0))

    reports = [None] * len(initial_points)
    for _ in tqdm(range(len(initial_points)), desc='trajectories', disable=not verbose):
        index, report = results.get()
        reports[index] = report

    # Add a poison pill for each process
    for _ in workers:
        tasks.put(None)
    tasks.join()
    for w in workers:
        w.join()
    return reports

def drift_batch(bundle, initial_points, t_final, dt, nb_procs=1, verbose=False, keep_errors=False, volume=None):
    """
    jacobian_log_det for independent initial points, in input order.
    volume is a (VolumeSpec, PhaseDensity) pair; the bundle's preserved volume
    is used when it is omitted and the bundle has a certificate.
    The first error (in input order) is re-raised once every trajectory is done,
    unless keep_errors is set: failed trajectories then hold their exception.
    """
    initial_points = list(initial_points)
    if volume is None:
        volume = bundle.preserved_volume()
    volume = tuple(volume) if volume is not None else (None, None)
    nb_procs = min(nb_procs, len(initial_points))
    logging.info("Volume drift of %d trajectories (T = %g, dt = %g) on %d process(es)",
                 len(initial_points), t_final, dt, max(nb_procs, 1))
    if nb_procs <= 1:
        reports = _drift_serial(bundle, initial_points, t_final, dt, volume, verbose)
    else:
        reports = _drift_parallel(bundle, initial_points, t_final, dt, volume, nb_procs, verbose)

    if not keep_errors:
        for report in reports:
            if isinstance(report, Exception):
                raise report
    return reports
