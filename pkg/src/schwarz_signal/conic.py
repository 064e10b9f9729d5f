"""Receiver on a Newtonian conic around the central body.

The orbit is ``r = p / (1 + e cos phi)`` with true anomaly ``phi`` measured
from periapsis. A static transmitter sits on the ``phi = 0`` axis at ``r1``
and the signal travels along the straight chord to the receiver. Proper time
along the orbit follows from the Schwarzschild speed, so ``phi(tau)`` is
found by integrating ``dtau/dphi``.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from . import _accel
from .catalog import C
from .errors import (DegenerateGeometryError, InsideHorizonError, OpenBranchError,
                     RelativisticOrbitError)
from .series import Path, solve_path

_CLAMP = 1e-9


@_accel.kernel
def _conic_rate(phi, params):
    # dtau/dphi = sqrt(m - (h/pc)^2 (e^2 sin^2/m + w^2)) * p^2 / (h w^2)
    p, e, h, alpha, c = params
    w = 1.0 + e * np.cos(phi)
    r = p / w
    m = (r - alpha) / r
    s = e * np.sin(phi)
    q = h / (p * c)
    rad = m - q * q * (s * s / m + w * w)
    return np.sqrt(rad) * p * p / (h * w * w)


@_accel.kernel
def _conic_point(phi, params):
    # (beta1, beta2, dtau/dphi, dT/dphi) at true anomaly phi. The transmitter
    # sits at (r1, 0); r1 = inf takes the limit of a source far along that axis.
    # m1 is the transmitter's metric factor.
    p, e, h, alpha, c, r1, m1 = params
    cs = np.cos(phi)
    sn = np.sin(phi)
    w = 1.0 + e * cs
    r = p / w
    m = (r - alpha) / r
    s = e * sn
    v = h / p
    b2 = (v * v) * (s * s / m + w * w) / (m * c * c)
    if np.isinf(r1):
        d = np.sqrt(cs * cs / m + sn * sn)
        proj = v * m**-1.5 * sn * (1.0 - w * alpha / r) / d
    else:
        d = np.sqrt((r - r1 * cs) ** 2 / m + (r1 * sn) ** 2)
        proj = v * m**-1.5 * sn * (e * r + r1 - r1 * w * alpha / r) / d
    dT = p * p / (h * w * w)
    beta1 = (1.0 - proj / c) / np.sqrt(1.0 - b2)
    return beta1, np.sqrt(m1 / m), np.sqrt(m * (1.0 - b2)) * dT, dT


def default_phi0(e):
    """Periapsis for bound orbits; just inside the incoming asymptote otherwise."""
    if e < 1.0:
        return 0.0
    return -(math.acos(-1.0 / e) - 0.1)


@dataclass(frozen=True)
class ConicOrbit:
    """Keplerian conic with semi-latus rectum ``p`` and eccentricity ``e``.

    ``h = sqrt(GM p)`` is the specific angular momentum.
    """

    body: object
    e: float
    p: float
    phi0: float = 0.0

    def __post_init__(self):
        if not (self.e >= 0.0 and self.p > 0.0):
            raise ValueError(f"need e >= 0 and p > 0, got e={self.e!r}, p={self.p!r}")
        rp = self.p / (1.0 + self.e)
        if not rp > self.body.alpha:
            raise InsideHorizonError(rp, self.body.alpha)
        self.radius(self.phi0)

    @classmethod
    def from_axis(cls, body, e, a, phi0=0.0):
        """Build from the semi-major axis (for a parabola, the periapsis scale ``p/2``)."""
        if e < 1.0:
            p = a * (1.0 - e * e)
        elif e == 1.0:
            p = 2.0 * a
        else:
            p = a * (e * e - 1.0)
        return cls(body, float(e), float(p), float(phi0))

    @classmethod
    def from_semi_latus(cls, body, e, p, phi0=0.0):
        return cls(body, float(e), float(p), float(phi0))

    @property
    def alpha(self):
        return self.body.alpha

    @property
    def a(self):
        if self.e == 1.0:
            return self.p / 2.0
        return self.p / abs(1.0 - self.e * self.e)

    @property
    def h(self):
        return math.sqrt(self.body.gm * self.p)

    @property
    def is_bound(self):
        return self.e < 1.0

    @property
    def phi_asymptote(self):
        """Limiting true anomaly of an open orbit; ``inf`` when bound."""
        return math.inf if self.is_bound else math.acos(-1.0 / self.e)

    @property
    def newtonian_period(self):
        if not self.is_bound:
            raise ValueError("open orbits have no period")
        return 2.0 * math.pi * math.sqrt(self.a**3 / self.body.gm)

    @property
    def params(self):
        return (self.p, self.e, self.h, self.alpha, C)

    def _w(self, phi):
        phi = np.asarray(phi, dtype=float)
        w = 1.0 + self.e * np.cos(phi)
        if np.any(w <= 0.0):
            bad = phi.flat[np.flatnonzero(w <= 0.0)[0]]
            raise OpenBranchError(float(bad), self.e)
        return w

    def radius(self, phi):
        r = self.p / self._w(phi)
        if np.any(r <= self.alpha):
            raise InsideHorizonError(float(np.min(r)), self.alpha)
        return _ret(r)

    def angular_rate(self, phi):
        """``dphi/dT = (h/p**2) (1 + e cos phi)**2``."""
        return _ret(self.h / self.p**2 * self._w(phi) ** 2)

    def radial_rate(self, phi):
        """``dr/dT = (h/p) e sin phi``."""
        self._w(phi)
        return _ret(self.h / self.p * self.e * np.sin(np.asarray(phi, dtype=float)))

    def metric(self, phi):
        r = self.radius(phi)
        return (r - self.alpha) / r

    def speed(self, phi):
        """Schwarzschild spatial speed ``u_g`` along the orbit."""
        phi = np.asarray(phi, dtype=float)
        w = self._w(phi)
        m = self.metric(phi)
        s = self.e * np.sin(phi)
        return _ret(self.h / self.p / np.sqrt(m) * np.sqrt(s * s / m + w * w))

    def dtau_dphi(self, phi, check=True):
        phi = np.asarray(phi, dtype=float)
        self.radius(phi)
        with np.errstate(invalid="ignore"):
            out = _conic_rate.py(phi, self.params)
        if check and not np.all(out > 0.0):
            bad = phi.flat[np.flatnonzero(~(out > 0.0))[0]]
            raise RelativisticOrbitError(
                f"relativistic-orbit-invalid: proper-time radicand <= 0 at phi={bad!r}; "
                "orbit too relativistic for the Newtonian-conic assumption"
            )
        return _ret(out)

    def dT_dphi(self, phi):
        return self.p**2 / (self.h * self._w(phi) ** 2)

    def phi_range(self, margin=1e-3):
        """Anomaly interval spanned by the orbit, trimmed near open asymptotes."""
        if self.is_bound:
            return -math.pi, math.pi
        lim = self.phi_asymptote - margin
        return -lim, lim

    @property
    def max_angular_speed(self):
        """Upper estimate of ``dphi/dtau`` over the orbit (rad/s)."""
        lo, hi = self.phi_range()
        return 1.05 / float(np.min(self.dtau_dphi(np.linspace(lo, hi, 4097))))

    def check_relativistic(self, n=4097):
        """Raise RelativisticOrbitError if ``dtau/dphi`` vanishes anywhere on the orbit."""
        lo, hi = self.phi_range()
        self.dtau_dphi(np.linspace(lo, hi, n))


def arc_proper_time(orbit, phi_a, phi_b):
    """Receiver proper time to move from ``phi_a`` to ``phi_b`` (s)."""
    val, _ = integrate.quad(lambda f: orbit.dtau_dphi(f), phi_a, phi_b,
                            epsabs=0.0, epsrel=1e-12, limit=400)
    return float(val)


@dataclass(frozen=True)
class OrbitGeometry:
    """Static transmitter on the ``phi = 0`` axis at radius ``r1``."""

    r1: float


def _ret(x):
    return float(x) if np.ndim(x) == 0 else x


def _projected_velocity(orbit, r1, phi):
    # metric inner product of the receiver velocity with the unit wave vector
    # pointing from the transmitter at (r1, 0) to the receiver at (r2, phi)
    phi = np.asarray(phi, dtype=float)
    w = orbit._w(phi)
    r2 = orbit.p / w
    m = (r2 - orbit.alpha) / r2
    sn, cs = np.sin(phi), np.cos(phi)
    d = np.sqrt((r2 - r1 * cs) ** 2 / m + (r1 * sn) ** 2)
    if np.any(d == 0.0):
        raise DegenerateGeometryError("transmitter and receiver coincide")
    num = orbit.e * r2 + r1 - r1 * w * orbit.alpha / r2
    return orbit.h / orbit.p * m**-1.5 * sn * num / d


def _projected_velocity_infty(orbit, phi):
    # same, with the transmitter pushed to infinity along the phi = 0 axis
    phi = np.asarray(phi, dtype=float)
    w = orbit._w(phi)
    r2 = orbit.p / w
    m = (r2 - orbit.alpha) / r2
    sn, cs = np.sin(phi), np.cos(phi)
    d = np.sqrt(cs * cs / m + sn * sn)
    return orbit.h / orbit.p * m**-1.5 * sn * (1.0 - w * orbit.alpha / r2) / d


def _clamped_ratio(num, den):
    x = np.asarray(num / den, dtype=float)
    if np.any(np.abs(x) > 1.0 + _CLAMP):
        raise DegenerateGeometryError(f"|cos psi| = {np.max(np.abs(x))!r} exceeds 1")
    return _ret(np.clip(x, -1.0, 1.0))


@dataclass(frozen=True)
class ConicTrajectory:
    """Orbiting receiver listening to a static transmitter on the ``phi = 0`` axis."""

    orbit: ConicOrbit
    geometry: OrbitGeometry

    def __post_init__(self):
        if not self.geometry.r1 > self.orbit.alpha:
            raise InsideHorizonError(self.geometry.r1, self.orbit.alpha)
        self.orbit.check_relativistic()

    @property
    def body(self):
        return self.orbit.body

    @property
    def r1(self):
        return self.geometry.r1

    def cos_psi(self, phi):
        return _clamped_ratio(_projected_velocity(self.orbit, self.r1, phi), self.orbit.speed(phi))

    def components(self, phi):
        o = self.orbit
        b = np.asarray(o.speed(phi)) / C
        bc = _projected_velocity(o, self.r1, phi) / C
        beta1 = (1.0 - bc) / np.sqrt((1.0 - b) * (1.0 + b))
        m1 = (self.r1 - o.alpha) / self.r1
        beta2 = np.sqrt(m1 / o.metric(phi))
        return beta1, beta2

    def path(self):
        o = self.orbit
        m1 = (self.r1 - o.alpha) / self.r1
        return Path(o.phi0, _conic_rate, o.params, self.components, o.dT_dphi, name="phi",
                    max_speed=o.max_angular_speed, point=_conic_point,
                    point_params=o.params + (self.r1, m1))

    def fsp_series(self, tau_grid, substeps=None, backend=None, scenario=""):
        return solve_path(self.path(), tau_grid, substeps, scenario, backend)


def radius_of_phi(orbit, phi):
    return orbit.radius(phi)


def angular_rate(orbit, phi):
    return orbit.angular_rate(phi)


def radial_rate(orbit, phi):
    return orbit.radial_rate(phi)


def ug_conic(orbit, phi):
    """Schwarzschild spatial speed at true anomaly ``phi`` (m/s)."""
    return orbit.speed(phi)


def cos_psi_conic(orbit, geometry, phi):
    """Cosine of the angle between receiver velocity and the incoming wave vector.

    Positive when the receiver moves away from the transmitter.
    """
    return _clamped_ratio(_projected_velocity(orbit, geometry.r1, phi), orbit.speed(phi))


def cos_psi_infty(orbit, phi):
    """``cos psi`` for a transmitter infinitely far along the ``phi = 0`` axis."""
    return _clamped_ratio(_projected_velocity_infty(orbit, phi), orbit.speed(phi))


def proper_time_rate(orbit, phi):
    """``dtau/dphi`` (s/rad); raises RelativisticOrbitError if not positive."""
    return orbit.dtau_dphi(phi)


def fsp_conic(orbit, geometry, tau_grid, substeps=None, backend=None):
    """FSP series for an orbiting receiver, starting at ``orbit.phi0``.

    Parameters
    ----------
    orbit : ConicOrbit
    geometry : OrbitGeometry
    tau_grid : array_like
        Receiver proper times from 0, strictly increasing (s).

    Returns
    -------
    FspSeries
        ``extras['phi']`` holds the true anomaly at each sample.
    """
    return ConicTrajectory(orbit, geometry).fsp_series(tau_grid, substeps, backend)
