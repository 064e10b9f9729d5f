"""Scenario dispatch, time-map inversion and series I/O.

Every trajectory object exposes ``fsp_series(tau_grid, substeps, backend)``;
:func:`build_series` lays down the uniform receiver-time grid and calls it.
"""

from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicHermiteSpline, PchipInterpolator

from .errors import IntegrationError, InsideHorizonError
from .series import FspSeries


@dataclass(frozen=True)
class StaticReceiver:
    """Receiver held at fixed radius ``r2``: a constant shift."""

    body: object
    r1: float
    r2: float

    def __post_init__(self):
        for r in (self.r1, self.r2):
            if not r > self.body.alpha:
                raise InsideHorizonError(r, self.body.alpha)

    def fsp_series(self, tau_grid, substeps=None, backend=None, scenario=""):
        tau = np.ascontiguousarray(tau_grid, dtype=float)
        a = self.body.alpha
        m1, m2 = (self.r1 - a) / self.r1, (self.r2 - a) / self.r2
        beta2 = np.sqrt(m1 / m2)
        rate = np.sqrt(m2)  # dtau/dT of a static clock
        ones = np.ones_like(tau)
        return FspSeries(tau, tau / rate, beta2 * ones, ones, beta2 * ones, beta2 * tau,
                         B1=tau.copy(), B2=beta2 * tau, dT_dtau=ones / rate, scenario=scenario)


def uniform_grid(duration, n):
    if not duration > 0:
        raise ValueError(f"duration must be positive, got {duration!r}")
    if int(n) != n or n < 2:
        raise ValueError(f"need an integer sample count >= 2, got {n!r}")
    return np.linspace(0.0, float(duration), int(n))


def build_series(scenario, duration=None, n=None, substeps=None, backend=None):
    """FSP series on ``n`` uniform receiver-time samples over ``[0, duration]``.

    ``scenario`` is a trajectory object or a ``ScenarioPreset``; for a preset,
    ``duration`` and ``n`` default to the preset's own values.
    """
    pid = ""
    if hasattr(scenario, "build"):
        pid = scenario.id
        duration = scenario.duration if duration is None else duration
        n = scenario.resolution if n is None else n
        scenario = scenario.build()
    if duration is None or n is None:
        raise ValueError("duration and n are required for a bare trajectory")
    return scenario.fsp_series(uniform_grid(duration, n), substeps=substeps,
                               backend=backend, scenario=pid)


class TimeMap:
    """Monotone cubic maps between receiver time ``tau`` and Newtonian ``T``.

    Uses Hermite cubics with the exact slopes when the series carries
    ``dT_dtau``, otherwise PCHIP.
    """

    def __init__(self, series):
        tau, T = series.tau, series.T
        if not (np.all(np.diff(tau) > 0) and np.all(np.diff(T) > 0)):
            raise IntegrationError("internal-consistency: time map is not strictly monotone")
        slope = series.dT_dtau
        if slope is not None and np.all(np.isfinite(slope)) and np.all(slope > 0):
            self._fwd = CubicHermiteSpline(tau, T, slope)
            self._inv = CubicHermiteSpline(T, tau, 1.0 / slope)
        else:
            self._fwd = PchipInterpolator(tau, T)
            self._inv = PchipInterpolator(T, tau)
        self.tau_range = (float(tau[0]), float(tau[-1]))
        self.T_range = (float(T[0]), float(T[-1]))

    def T_of_tau(self, tau):
        return self._fwd(tau)

    def tau_of_T(self, T):
        return self._inv(T)

    __call__ = T_of_tau


def invert_time_map(series):
    return TimeMap(series)


def timemap_table(series):
    """Columns ``T, tau, tau - T`` as an ``(n, 3)`` array."""
    return np.column_stack([series.T, series.tau, series.tau - series.T])


def write_series(series, dest=None):
    return series.to_csv(dest)


def read_series(src):
    return FspSeries.from_csv(src)
