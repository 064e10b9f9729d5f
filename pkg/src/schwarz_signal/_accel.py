"""Hot loops, compiled with numba when available.

``SCHWARZ_SIGNAL_BACKEND`` selects ``numba`` (default when importable) or
``numpy``. Under ``numpy`` the sequential time-map integration runs as plain
Python and the resampler runs vectorised. Both implementations stay callable
in one process so they can be compared (see ``benchmarks/``).

``SCHWARZ_SIGNAL_THREADS`` caps numba's thread pool.
"""

import math
import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - numba is optional
    numba = None

HAVE_NUMBA = numba is not None


def _default_backend():
    want = os.environ.get("SCHWARZ_SIGNAL_BACKEND", "").strip().lower()
    if want not in ("", "numba", "numpy"):
        raise ValueError(f"SCHWARZ_SIGNAL_BACKEND must be 'numba' or 'numpy', got {want!r}")
    if want == "numpy" or not HAVE_NUMBA:
        return "numpy"
    return "numba"


BACKEND = _default_backend()

if HAVE_NUMBA:
    _threads = os.environ.get("SCHWARZ_SIGNAL_THREADS")
    if _threads:
        numba.set_num_threads(max(1, min(int(_threads), numba.config.NUMBA_NUM_THREADS)))


def _resolve(backend):
    backend = backend or BACKEND
    if backend == "numba" and not HAVE_NUMBA:
        raise RuntimeError("numba backend requested but numba is not installed")
    return backend


class Kernel:
    """A scalar function ``f(y, params)`` usable from both backends.

    ``py`` is the plain function, which also broadcasts over numpy arrays;
    ``jit`` is the lazily compiled numba dispatcher.
    """

    def __init__(self, fn):
        self.py = fn
        self._jit = None
        self.__name__ = fn.__name__
        self.__doc__ = fn.__doc__

    @property
    def jit(self):
        if self._jit is None:
            self._jit = numba.njit(cache=True)(self.py)
        return self._jit

    def __call__(self, y, params):
        return self.py(y, params)


def kernel(fn):
    return Kernel(fn)


# -- time map ----------------------------------------------------------------


def _rk4_time_map(rate, params, y0, grid, substeps):
    # Integrates dy/dtau = 1 / rate(y) with classical RK4, `substeps` equal
    # steps per grid interval. Kahan-compensated accumulation of y.
    n = grid.shape[0]
    out = np.empty(n)
    out[0] = y0
    y = y0
    comp = 0.0
    for k in range(n - 1):
        h = (grid[k + 1] - grid[k]) / substeps
        for _ in range(substeps):
            k1 = 1.0 / rate(y, params)
            k2 = 1.0 / rate(y + 0.5 * h * k1, params)
            k3 = 1.0 / rate(y + 0.5 * h * k2, params)
            k4 = 1.0 / rate(y + h * k3, params)
            dy = h * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0 - comp
            t = y + dy
            comp = (t - y) - dy
            y = t
        if not math.isfinite(y):
            for j in range(k + 1, n):
                out[j] = np.nan
            break
        out[k + 1] = y
    return out


_rk4_time_map_jit = numba.njit(cache=False)(_rk4_time_map) if HAVE_NUMBA else None


def rk4_time_map(rate, params, y0, grid, substeps=8, backend=None):
    """Solve ``y(tau)`` on ``grid`` given the rate ``dtau/dy = rate(y)``.

    Parameters
    ----------
    rate : Kernel
        Proper-time rate with respect to the trajectory variable.
    params : tuple of float
        Extra arguments forwarded to ``rate``.
    y0 : float
        Trajectory variable at ``grid[0]``.
    grid : ndarray
        Monotone receiver-time grid; a decreasing grid integrates backwards.
    substeps : int
        RK4 steps per grid interval.

    Returns
    -------
    ndarray
        ``y`` at every grid point; NaN from the first non-finite state on.
    """
    grid = np.ascontiguousarray(grid, dtype=float)
    params = tuple(float(p) for p in params)
    if _resolve(backend) == "numba":
        return _rk4_time_map_jit(rate.jit, params, float(y0), grid, int(substeps))
    return _rk4_time_map(rate.py, params, float(y0), grid, int(substeps))


# -- pointwise evaluation ------------------------------------------------------


def _map_point(point, params, y, o1, o2, o3, o4):
    for i in range(y.shape[0]):
        a, b, c, d = point(y[i], params)
        o1[i] = a
        o2[i] = b
        o3[i] = c
        o4[i] = d


_map_point_jit = numba.njit(cache=False)(_map_point) if HAVE_NUMBA else None


def map_point(point, params, y, backend=None):
    """Evaluate a 4-output point kernel over ``y``; returns four arrays."""
    y = np.ascontiguousarray(y, dtype=float)
    params = tuple(float(p) for p in params)
    if _resolve(backend) == "numba":
        out = [np.empty_like(y) for _ in range(4)]
        _map_point_jit(point.jit, params, y, *out)
        return tuple(out)
    return tuple(np.broadcast_to(v, y.shape) for v in point.py(y, params))


# -- windowed-sinc resampling ------------------------------------------------

SINC_HALF = 8  # 16 taps
KAISER_BETA = 14.0


def _njit(**opts):
    def wrap(fn):
        return numba.njit(cache=True, **opts)(fn) if HAVE_NUMBA else fn
    return wrap


@_njit()
def _bessel_i0(x):
    # power series, quick to converge for |x| <= KAISER_BETA
    total = 1.0
    term = 1.0
    q = 0.25 * x * x
    k = 1.0
    while term > 1e-17 * total:
        term *= q / (k * k)
        total += term
        k += 1.0
    return total


@_njit(parallel=True)
def _sinc_resample_jit(samples, pos, half, beta):
    n = samples.shape[0]
    m = pos.shape[0]
    out = np.zeros(m, dtype=np.complex128)
    norm = 1.0 / _bessel_i0(beta)
    for i in numba.prange(m):
        x = pos[i]
        i0 = int(math.floor(x))
        acc = 0.0 + 0.0j
        for j in range(max(i0 - half + 1, 0), min(i0 + half + 1, n)):
            d = x - j
            if d == 0.0:
                acc += samples[j]
                continue
            u = d / half
            r = 1.0 - u * u
            if r > 0.0:
                w = math.sin(math.pi * d) / (math.pi * d) * _bessel_i0(beta * math.sqrt(r)) * norm
                acc += w * samples[j]
        out[i] = acc
    return out


def _sinc_resample_numpy(samples, pos, half, beta):
    n = samples.shape[0]
    base = np.floor(pos).astype(np.int64)
    out = np.zeros(pos.shape[0], dtype=np.complex128)
    norm = 1.0 / np.i0(beta)
    for j in range(-half + 1, half + 1):
        idx = base + j
        d = pos - idx
        r = np.clip(1.0 - (d / half) ** 2, 0.0, None)
        w = np.sinc(d) * np.i0(beta * np.sqrt(r)) * norm
        ok = (idx >= 0) & (idx < n) & (r > 0.0)
        out[ok] += w[ok] * samples[idx[ok]]
    return out


def sinc_resample(samples, pos, half=SINC_HALF, beta=KAISER_BETA, backend=None):
    """Evaluate a uniformly sampled signal at fractional sample positions.

    Kaiser-windowed sinc with ``2*half`` taps. Samples outside the buffer
    count as zero.
    """
    samples = np.ascontiguousarray(samples, dtype=np.complex128)
    pos = np.ascontiguousarray(pos, dtype=float)
    if _resolve(backend) == "numba":
        return _sinc_resample_jit(samples, pos, int(half), float(beta))
    return _sinc_resample_numpy(samples, pos, int(half), float(beta))
