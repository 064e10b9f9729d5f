"""FSP time series and the pipeline shared by all trajectories.

Each trajectory reduces to a scalar variable ``y`` (Newtonian time for radial
escape, true anomaly for conics) with a known proper-time rate ``dtau/dy``.
The pipeline solves ``y`` on the receiver-time grid, evaluates the shift
components pointwise, and accumulates ``T`` and the warped times ``B`` by
Gauss-Legendre quadrature in ``y`` between consecutive grid points.
"""

import io
import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Optional

import numpy as np

from . import _accel
from .errors import IntegrationError

CSV_COLUMNS = ("tau", "T", "beta", "beta1", "beta2", "B")
MODES = ("full", "gfsp", "gmdfsp")

# 3-point Gauss-Legendre on [0, 1]
_GL_X = 0.5 + 0.5 * np.array([-np.sqrt(0.6), 0.0, np.sqrt(0.6)])
_GL_W = np.array([5.0, 8.0, 5.0]) / 18.0
_CHUNK = 1 << 19
STEP_FRACTION = 0.004
MAX_SUBSTEPS = 512


class FspSample(NamedTuple):
    tau: float
    T: float
    beta: float
    beta1: float
    beta2: float
    B: float


@dataclass
class FspSeries:
    """Shift parameters sampled on a receiver proper-time grid.

    ``B`` integrates ``beta``; ``B1`` and ``B2`` integrate ``beta1`` and
    ``beta2`` alone and back the single-effect channel modes. ``dT_dtau`` is
    the exact time-map slope at each sample when the producer knows it.
    """

    tau: np.ndarray
    T: np.ndarray
    beta: np.ndarray
    beta1: np.ndarray
    beta2: np.ndarray
    B: np.ndarray
    B1: Optional[np.ndarray] = None
    B2: Optional[np.ndarray] = None
    dT_dtau: Optional[np.ndarray] = None
    extras: dict = field(default_factory=dict)
    scenario: str = ""

    def __len__(self):
        return self.tau.shape[0]

    def __getitem__(self, k):
        return FspSample(*(float(getattr(self, c)[k]) for c in CSV_COLUMNS))

    @property
    def samples(self):
        return [self[k] for k in range(len(self))]

    @property
    def step(self):
        """Grid step if the grid is uniform to 1e-12 relative, else None."""
        d = np.diff(self.tau)
        h = (self.tau[-1] - self.tau[0]) / (len(self) - 1)
        return float(h) if np.all(np.abs(d - h) <= 1e-12 * abs(h) + 4 * np.spacing(self.tau[-1])) else None

    @property
    def duration(self):
        return float(self.tau[-1] - self.tau[0])

    def warped_time(self, mode="full"):
        """``B`` for the requested channel mode (full, gfsp or gmdfsp)."""
        if mode == "full":
            return self.B
        if mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
        pre = self.B2 if mode == "gfsp" else self.B1
        if pre is not None:
            return pre
        return cumulative_trapezoid(self.beta2 if mode == "gfsp" else self.beta1, self.tau)

    def validate(self, rtol=1e-12):
        """Check the structural invariants; raise IntegrationError if broken."""
        if len(self) < 2:
            raise IntegrationError("series needs at least two samples")
        if not np.all(np.diff(self.tau) > 0):
            raise IntegrationError("tau grid is not strictly increasing")
        if not np.all(np.diff(self.T) > 0):
            raise IntegrationError("Newtonian time is not strictly increasing")
        if not np.all(self.beta > 0):
            raise IntegrationError("beta must be positive")
        if np.any(np.abs(self.beta - self.beta1 * self.beta2) > rtol * np.abs(self.beta)):
            raise IntegrationError("beta != beta1 * beta2")
        return self

    def to_csv(self, dest=None):
        """Write ``tau,T,beta,beta1,beta2,B`` rows at 17 significant digits.

        ``dest`` may be a path or a text stream; with no ``dest`` the CSV text
        is returned.
        """
        data = np.column_stack([getattr(self, c) for c in CSV_COLUMNS])
        buf = io.StringIO() if dest is None else dest
        if isinstance(buf, (str, bytes)) or hasattr(buf, "__fspath__"):
            with open(buf, "w", newline="") as fh:
                return self.to_csv(fh)
        buf.write(",".join(CSV_COLUMNS) + "\n")
        np.savetxt(buf, data, fmt="%.17g", delimiter=",")
        return buf.getvalue() if dest is None else None

    @classmethod
    def from_csv(cls, src, scenario=""):
        data = np.loadtxt(src, delimiter=",", skiprows=1, ndmin=2)
        cols = {c: np.ascontiguousarray(data[:, i]) for i, c in enumerate(CSV_COLUMNS)}
        return cls(**cols, scenario=scenario)


def cumulative_trapezoid(y, x):
    out = np.empty_like(np.asarray(y, dtype=float))
    out[0] = 0.0
    np.cumsum(0.5 * (y[1:] + y[:-1]) * np.diff(x), out=out[1:])
    return out


@dataclass(frozen=True)
class Path:
    """A trajectory reduced to one monotone variable ``y``.

    ``rate`` gives ``dtau/dy`` (as an ``_accel.Kernel`` taking ``params``);
    ``dT_dy`` gives ``dT/dy`` or is None when ``y`` is Newtonian time itself;
    ``components(y)`` returns ``(beta1, beta2)`` arrays.
    """

    y0: float
    rate: _accel.Kernel
    params: tuple
    components: Callable
    dT_dy: Optional[Callable] = None
    name: str = "y"
    extras: Optional[Callable] = None
    # distance in y over which the rate changes appreciably, and the largest
    # dy/dtau along the path; together they size the RK4 step
    y_scale: float = 1.0
    max_speed: Optional[float] = None
    # optional fused kernel returning (beta1, beta2, dtau/dy, dT/dy) in one pass
    point: Optional[_accel.Kernel] = None
    point_params: tuple = ()

    def dtau_dy(self, y):
        return self.rate.py(y, self.params)

    def evaluate(self, y, backend=None):
        """``(beta1, beta2, dtau/dy, dT/dy)`` at each ``y``; ``dT/dy`` is None
        when ``y`` is Newtonian time."""
        if self.point is not None:
            return _accel.map_point(self.point, self.point_params, y, backend)
        b1, b2 = self.components(y)
        return b1, b2, self.dtau_dy(y), None if self.dT_dy is None else self.dT_dy(y)

    def auto_substeps(self, h, per_step=STEP_FRACTION):
        """RK4 substeps so that each advances ``y`` by at most ``per_step * y_scale``."""
        speed = self.max_speed
        if speed is None:
            speed = 1.0 / float(self.dtau_dy(self.y0))
        n = math.ceil(h * speed / (per_step * self.y_scale))
        return int(min(max(n, 1), MAX_SUBSTEPS))


def _interval_integrals(fn, y, ncols):
    """Gauss-Legendre integrals of ``fn`` over each ``[y[k], y[k+1]]``.

    ``fn(ynodes)`` returns a tuple of ``ncols`` arrays. Work is chunked to
    bound memory on multi-million-sample grids.
    """
    m = y.shape[0] - 1
    out = np.empty((ncols, m))
    for s in range(0, m, _CHUNK):
        a = y[s:s + _CHUNK + 1]
        h = np.diff(a)
        acc = np.zeros((ncols, h.shape[0]))
        for x, w in zip(_GL_X, _GL_W):
            vals = fn(a[:-1] + x * h)
            for i in range(ncols):
                acc[i] += w * vals[i]
        out[:, s:s + h.shape[0]] = acc * h
    return out


def _cumulate(increments):
    out = np.empty(increments.shape[0] + 1)
    out[0] = 0.0
    np.cumsum(increments, out=out[1:])
    return out


def solve_path(path, tau_grid, substeps=None, scenario="", backend=None):
    """Build the FSP series for a trajectory on a receiver-time grid.

    ``tau_grid`` must start at zero and increase strictly. ``substeps`` is the
    number of RK4 steps per grid interval; by default it is sized from the
    largest grid interval via :meth:`Path.auto_substeps`.
    """
    tau = np.ascontiguousarray(tau_grid, dtype=float)
    if tau.ndim != 1 or tau.shape[0] < 2:
        raise ValueError("tau grid needs at least two points")
    if tau[0] != 0.0 or not np.all(np.diff(tau) > 0):
        raise ValueError("tau grid must start at 0 and increase strictly")
    if substeps is None:
        substeps = path.auto_substeps(float(np.max(np.diff(tau))))
    if int(substeps) < 1:
        raise ValueError("substeps must be >= 1")

    y = _accel.rk4_time_map(path.rate, path.params, path.y0, tau, substeps, backend=backend)
    if not np.all(np.isfinite(y)):
        bad = int(np.flatnonzero(~np.isfinite(y))[0])
        raise IntegrationError(
            f"time-map integration left the valid domain near tau={tau[bad]!r} s"
        )
    if not np.all(np.diff(y) > 0):
        raise IntegrationError("trajectory variable is not strictly increasing in tau")
    out = assemble(path, tau, y, scenario=scenario, backend=backend)
    out.extras["substeps"] = int(substeps)
    return out


def assemble(path, tau, y, scenario="", backend=None):
    """Evaluate components at ``y`` and accumulate ``T``, ``B``, ``B1``, ``B2``."""
    beta1, beta2, rate, dT_dy = path.evaluate(y, backend)
    beta = beta1 * beta2
    ref = (float(beta[0]), float(beta1[0]), float(beta2[0]))
    newtonian = dT_dy is None

    def integrands(yn):
        b1, b2, r, dT = path.evaluate(yn, backend)
        cols = [(b1 * b2 - ref[0]) * r, (b1 - ref[1]) * r, (b2 - ref[2]) * r]
        if not newtonian:
            cols.append(dT)
        return cols

    inc = _interval_integrals(integrands, y, 3 if newtonian else 4)
    if not np.all(np.isfinite(inc)):
        raise IntegrationError("non-finite shift or rate along the solved trajectory")
    # the constant part of each warp is exact on the grid; only the small
    # deviation from the initial value is accumulated
    B = ref[0] * tau + _cumulate(inc[0])
    B1 = ref[1] * tau + _cumulate(inc[1])
    B2 = ref[2] * tau + _cumulate(inc[2])
    if newtonian:
        T = y.copy()
        dT_dtau = 1.0 / rate
    else:
        T = _cumulate(inc[3])
        dT_dtau = dT_dy / rate
    extras = {path.name: y}
    if path.extras is not None:
        extras.update(path.extras(y))
    return FspSeries(tau, T, np.ascontiguousarray(beta), np.ascontiguousarray(beta1),
                     np.ascontiguousarray(beta2), B, B1, B2, np.ascontiguousarray(dT_dtau),
                     extras, scenario)
