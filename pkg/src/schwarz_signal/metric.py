"""Closed-form Schwarzschild quantities.

Every function accepts scalars or numpy arrays. Domain violations (a radius
at or inside the Schwarzschild length, a speed at or above ``c``) raise
instead of clamping.
"""

from dataclasses import dataclass

import numpy as np

from .catalog import C
from .errors import InsideHorizonError, SuperluminalError


def _check_outside(r, alpha):
    r, alpha = np.broadcast_arrays(np.asarray(r, dtype=float), np.asarray(alpha, dtype=float))
    bad = ~(r > alpha)
    if bad.any():
        i = np.flatnonzero(bad)[0]
        raise InsideHorizonError(float(r.flat[i]), float(alpha.flat[i]))


def _check_subluminal(u, what="speed"):
    u = np.asarray(u, dtype=float)
    bad = ~(np.abs(u) < C)
    if bad.any():
        raise SuperluminalError(float(u.flat[np.flatnonzero(bad)[0]]), what)


def _ret(x):
    return float(x) if np.ndim(x) == 0 else x


def metric_factor(r, alpha):
    """Return ``1 - alpha/r``, evaluated as ``(r - alpha)/r``.

    The static clock rate ``dt/dT`` at radius ``r`` is the square root of this.
    ``r = inf`` gives the limit 1.
    """
    _check_outside(r, alpha)
    r = np.asarray(r, dtype=float)
    with np.errstate(invalid="ignore"):
        m = (r - alpha) / r
    return _ret(np.where(np.isinf(r), 1.0, m))


def static_rate(r, alpha):
    """dt/dT for a static observer at ``r``."""
    return _ret(np.sqrt(metric_factor(r, alpha)))


def gfsp_static(r1, r2, alpha, alpha2=None):
    """Gravitational shift between static observers at ``r1`` and ``r2``.

    Returns ``sqrt((1 - alpha/r1) / (1 - alpha2/r2))``; ``alpha2`` defaults to
    ``alpha``. A separate ``alpha2`` covers transmitter and receiver sitting in
    different wells (source and destination stars).
    """
    if alpha2 is None:
        alpha2 = alpha
    return _ret(np.sqrt(metric_factor(r1, alpha) / metric_factor(r2, alpha2)))


def gamma_g(u_g):
    """Lorentz factor ``(1 - u_g**2/c**2)**-0.5`` of the Schwarzschild speed."""
    _check_subluminal(u_g, "u_g")
    b = np.asarray(u_g, dtype=float) / C
    return _ret(1.0 / np.sqrt((1.0 - b) * (1.0 + b)))


def dtau_dT(u_g, r, alpha):
    """Proper-time rate of a receiver moving at ``u_g`` through radius ``r``."""
    _check_subluminal(u_g, "u_g")
    b = np.asarray(u_g, dtype=float) / C
    return _ret(np.sqrt((1.0 - b) * (1.0 + b)) * np.sqrt(metric_factor(r, alpha)))


@dataclass(frozen=True)
class KinematicState:
    """Receiver speed and its angle to the incoming spatial wave vector."""

    u_g: float
    cos_psi: float

    def __post_init__(self):
        _check_subluminal(self.u_g, "u_g")
        if not (0.0 <= self.u_g):
            raise ValueError(f"u_g must be non-negative, got {self.u_g!r}")
        if not (-1.0 <= self.cos_psi <= 1.0):
            raise ValueError(f"cos_psi must lie in [-1, 1], got {self.cos_psi!r}")

    @property
    def gamma_g(self):
        return gamma_g(self.u_g)


def doppler_factor(u, cos_psi):
    """``gamma(u) * (1 - (u/c) cos_psi)``; shared by the curved and flat forms."""
    _check_subluminal(u)
    b = np.asarray(u, dtype=float) / C
    return _ret((1.0 - b * np.asarray(cos_psi, dtype=float)) / np.sqrt((1.0 - b) * (1.0 + b)))


def fsp_components(u_g, cos_psi, r1, r2, alpha):
    """Vectorised ``(beta, beta1, beta2)`` for arrays of receiver states."""
    beta1 = doppler_factor(u_g, cos_psi)
    beta2 = gfsp_static(r1, r2, alpha)
    return beta1 * beta2, beta1, beta2


def fsp_point(state, r1, r2, alpha):
    """Frequency-shift parameter for a moving receiver at ``r2``.

    Parameters
    ----------
    state : KinematicState
        Receiver speed ``u_g`` (Schwarzschild frame) and ``cos_psi``.
    r1, r2 : float
        Transmitter and receiver radii (m).
    alpha : float
        Schwarzschild length of the central body (m).

    Returns
    -------
    (beta, beta1, beta2) : tuple of float
        Total shift, the gravitationally-modified Doppler part and the
        gravitational part, with ``beta == beta1 * beta2``.
    """
    return fsp_components(state.u_g, state.cos_psi, r1, r2, alpha)


def sr_doppler(u_h, cos_psi):
    """Special-relativity Doppler factor, the flat-space comparison curve."""
    return doppler_factor(u_h, cos_psi)
