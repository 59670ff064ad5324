import numpy as np
from scipy.stats import qmc

FD_SCALE = np.cbrt(np.finfo(float).eps)

def make_rng(seed=0):
    """Seeded counter-based generator; identical seeds give identical streams on every platform."""
    return np.random.Generator(np.random.Philox(int(seed)))

def fd_steps(x):
    x = np.asarray(x, dtype=float)
    return FD_SCALE * np.maximum(1., np.abs(x))

def central_difference(func, x, steps=None):
    """
    Central-difference derivative of an array-valued func at x.
    The derivative axis is appended last: out[..., j] = d func / d x_j.
    """
    x = np.asarray(x, dtype=float)
    if steps is None:
        steps = fd_steps(x)
    f0 = np.asarray(func(x), dtype=float)
    out = np.zeros(f0.shape + (len(x),))
    for j in range(len(x)):
        xp = np.copy(x)
        xm = np.copy(x)
        xp[j] += steps[j]
        xm[j] -= steps[j]
        # effective step, exact in floating point
        h = xp[j] - xm[j]
        out[..., j] = (np.asarray(func(xp)) - np.asarray(func(xm))) / h
    return out

def matches_reference(value, reference, rtol):
    value = np.asarray(value, dtype=float)
    reference = np.asarray(reference, dtype=float)
    scale = np.maximum(1., np.abs(reference))
    return bool(np.all(np.abs(value - reference) <= rtol * scale))

def sample_box(rng, lower, upper, n, margin=0.):
    """Uniform samples inside a (possibly unbounded) box; infinite sides are clipped to [-2, 2]."""
    lo, hi = _finite_box(lower, upper, margin)
    return lo + (hi - lo) * rng.random((n, len(lo)))

def halton_grid(lower, upper, n, margin=0.):
    lo, hi = _finite_box(lower, upper, margin)
    if len(lo) == 0:
        return np.zeros((n, 0))
    sampler = qmc.Halton(d=len(lo), scramble=False)
    # skip the origin of the unscrambled sequence
    sampler.fast_forward(1)
    return qmc.scale(sampler.random(n), lo, hi)

def _finite_box(lower, upper, margin):
    lower = np.asarray(lower, dtype=float)
    upper = np.asarray(upper, dtype=float)
    lo = np.where(np.isfinite(lower), lower, np.minimum(-2., upper - 4.))
    hi = np.where(np.isfinite(upper), upper, np.maximum(2., lo + 4.))
    width = hi - lo
    return lo + margin * width, hi - margin * width
