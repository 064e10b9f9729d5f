"""Receiver receding radially at constant Newtonian speed.

The receiver starts at ``r0`` and moves outward at ``u_h = dr/dT`` along the
line joining it to a static transmitter at ``r1`` (``cos psi = +1``).
"""

import math
from dataclasses import dataclass

import numpy as np

from . import _accel
from .catalog import C
from .errors import InsideHorizonError, SuperluminalError
from .series import FspSeries, Path, solve_path


@_accel.kernel
def _straight_rate(T, params):
    # dtau/dT for radial recession: sqrt(m - u^2 / (c^2 m)), m = 1 - alpha/r
    r0, u_h, alpha, c = params
    r = r0 + u_h * T
    m = (r - alpha) / r
    b = u_h / c
    return np.sqrt(m - b * b / m)


@dataclass(frozen=True)
class StraightTrajectory:
    """Radial escape from ``r0`` at constant ``u_h`` (m/s).

    ``u_h = 0`` is accepted as the static-receiver limit.
    """

    body: object
    r1: float
    r0: float
    u_h: float

    def __post_init__(self):
        a = self.body.alpha
        for name in ("r1", "r0"):
            if not getattr(self, name) > a:
                raise InsideHorizonError(getattr(self, name), a)
        if not 0.0 <= self.u_h < C:
            raise SuperluminalError(self.u_h, "u_h")
        ug0 = self.u_h * self.r0 / (self.r0 - a)
        if not ug0 < C:
            raise SuperluminalError(ug0, "u_g at r0")

    @property
    def alpha(self):
        return self.body.alpha

    @property
    def params(self):
        return (self.r0, self.u_h, self.alpha, C)

    def radius_at(self, T):
        r = self.r0 + self.u_h * np.asarray(T, dtype=float)
        return float(r) if r.ndim == 0 else r

    def metric_at(self, T):
        r = self.radius_at(T)
        return (r - self.alpha) / r

    def ug_at(self, T):
        """Schwarzschild spatial speed ``u_h / (1 - alpha/r)``."""
        u = self.u_h / self.metric_at(T)
        if np.any(u >= C):
            raise SuperluminalError(float(np.max(u)), "u_g")
        return u

    def dtau_dT(self, T):
        return _straight_rate.py(np.asarray(T, dtype=float), self.params)

    def components(self, T):
        m = self.metric_at(T)
        b = self.u_h / C
        m1 = (self.r1 - self.alpha) / self.r1
        return np.sqrt((m - b) / (m + b)), np.sqrt(m1 / m)

    def path(self):
        # the rate changes on the time scale r0/u_h; dT/dtau peaks at the start
        scale = (self.r0 - self.alpha) / self.u_h if self.u_h > 0 else math.inf
        return Path(0.0, _straight_rate, self.params, self.components, name="T", y_scale=scale)

    def fsp_series(self, tau_grid, substeps=None, backend=None, scenario=""):
        return solve_path(self.path(), tau_grid, substeps, scenario, backend)


def radius_at(traj, T):
    return traj.radius_at(T)


def ug_at(traj, T):
    return traj.ug_at(T)


def fsp_exact(traj, tau_grid, substeps=None, backend=None):
    """Exact FSP series on ``tau_grid`` from the proper-time ODE.

    Parameters
    ----------
    traj : StraightTrajectory
    tau_grid : array_like
        Receiver proper times, starting at 0 and strictly increasing (s).
    substeps : int
        RK4 steps per grid interval.

    Returns
    -------
    FspSeries
        ``beta1 = sqrt((m - u/c) / (m + u/c))`` and ``beta2 = sqrt(m1 / m)``
        with ``m = 1 - alpha / r(T)``.
    """
    return traj.fsp_series(tau_grid, substeps, backend)


@dataclass(frozen=True)
class ChirpConstants:
    """Coefficients of the linearised shift ``beta ~ C0 + C1 T`` and ``tau ~ C2 T``.

    ``warnings`` lists the small-parameter assumptions that do not hold.
    """

    C0: float
    C1: float
    C2: float
    C3: float
    warnings: tuple = ()

    @property
    def valid(self):
        return not self.warnings


def chirp_constants(traj, tol=0.01):
    """First-order constants of the linear-in-time shift model."""
    a, r0, b = traj.alpha, traj.r0, traj.u_h / C
    s1 = np.sqrt((traj.r1 - a) / traj.r1)
    C0 = s1 * (1.0 - b + a / (2.0 * r0) * (1.0 - 3.0 * b))
    C1 = -(traj.u_h * a / (2.0 * r0 * r0)) * s1 * (1.0 - 3.0 * b)
    C2 = 1.0 - a / (2.0 * r0)
    warn = []
    if b > tol:
        warn.append(f"u_h/c = {b:.3g} exceeds {tol}")
    if a / r0 > tol:
        warn.append(f"alpha/r0 = {a / r0:.3g} exceeds {tol}")
    return ChirpConstants(float(C0), float(C1), float(C2), float(C1 / (2.0 * C2)), tuple(warn))


def fsp_linear_approx(traj, tau_grid):
    """Linearised series: ``beta = C0 + (C1/C2) tau``, ``B = C0 tau + C3 tau**2``.

    ``T`` is taken as ``tau / C2``; ``beta2`` is evaluated exactly at that
    radius and ``beta1`` is the remaining factor.
    """
    k = chirp_constants(traj)
    tau = np.ascontiguousarray(tau_grid, dtype=float)
    T = tau / k.C2
    beta = k.C0 + (k.C1 / k.C2) * tau
    m1 = (traj.r1 - traj.alpha) / traj.r1
    beta2 = np.sqrt(m1 / traj.metric_at(T))
    return FspSeries(tau, T, beta, beta / beta2, beta2, k.C0 * tau + k.C3 * tau * tau,
                     dT_dtau=np.full_like(tau, 1.0 / k.C2), scenario="linear-approx")


def time_map_approx(traj, T):
    """Logarithmic approximation ``tau ~ T - alpha/(2 u_h) ln(1 + u_h T / r0)``."""
    T = np.asarray(T, dtype=float)
    if traj.u_h == 0.0:
        out = T - traj.alpha / (2.0 * traj.r0) * T
    else:
        out = T - traj.alpha / (2.0 * traj.u_h) * np.log1p(traj.u_h * T / traj.r0)
    return float(out) if out.ndim == 0 else out
