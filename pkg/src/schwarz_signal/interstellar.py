"""Two-stage link between star systems.

Stage a carries the signal from a static transmitter deep in star A's well out
to flat space, where the two systems recede from each other at ``v_h``. Stage b
brings it down into star B's well to a receiver on an elliptical orbit. The
hand-off happens at infinity, so stage a is a constant factor and stage b is
the conic machinery with the transmitter pushed to infinity along ``phi = 0``.
"""

import math
from dataclasses import dataclass, replace

import numpy as np

from .catalog import C
from .conic import ConicOrbit, _conic_point, _conic_rate, _projected_velocity_infty, cos_psi_infty
from .errors import InsideHorizonError, SuperluminalError
from .series import Path, solve_path

__all__ = ["InterstellarLink", "beta_a", "cos_psi_infty", "beta_b_series",
           "beta_total_series", "fsp_point_interstellar"]


def _sr_recession(v):
    b = v / C
    return math.sqrt((1.0 - b) / (1.0 + b))


@dataclass(frozen=True)
class InterstellarLink:
    """Transmitter at ``r1`` around ``star_a``; receiver on ``orbit_b`` around star B.

    ``v_h`` is the recession speed of B relative to A along the line of
    sight; ``v_h = 0`` is accepted as the co-moving limit.
    """

    star_a: object
    r1: float
    v_h: float
    orbit_b: ConicOrbit

    def __post_init__(self):
        if not 0.0 <= self.v_h < C:
            raise SuperluminalError(self.v_h, "v_h")
        if not self.r1 > self.star_a.alpha:
            raise InsideHorizonError(self.r1, self.star_a.alpha)
        if not self.orbit_b.is_bound:
            raise ValueError(f"receiver orbit must be elliptical, got e={self.orbit_b.e!r}")
        self.orbit_b.check_relativistic()

    @property
    def star_b(self):
        return self.orbit_b.body

    @property
    def body(self):
        return self.star_b

    @property
    def sr_factor(self):
        return _sr_recession(self.v_h)

    @property
    def well_a(self):
        """``sqrt(1 - alpha_1/r1)``: the climb out of star A's well."""
        return math.sqrt((self.r1 - self.star_a.alpha) / self.r1)

    def components_b(self, phi):
        o = self.orbit_b
        b = np.asarray(o.speed(phi)) / C
        bc = _projected_velocity_infty(o, phi) / C
        return (1.0 - bc) / np.sqrt((1.0 - b) * (1.0 + b)), 1.0 / np.sqrt(o.metric(phi))

    def path_b(self):
        o = self.orbit_b
        return Path(o.phi0, _conic_rate, o.params, self.components_b, o.dT_dphi, name="phi",
                    max_speed=o.max_angular_speed, point=_conic_point,
                    point_params=o.params + (math.inf, 1.0))

    def fsp_series(self, tau_grid, substeps=None, backend=None, scenario=""):
        return beta_total_series(self, tau_grid, substeps, backend, scenario)


def beta_a(link):
    """Constant stage-a shift ``gamma_v (1 - v_h/c) sqrt(1 - alpha_1/r1)``."""
    return link.sr_factor * link.well_a


def beta_b_series(link, tau_grid, substeps=None, backend=None):
    """Stage-b series: Doppler along the orbit times ``(1 - alpha_2/r2)**-0.5``."""
    return solve_path(link.path_b(), tau_grid, substeps, "stage-b", backend)


def beta_total_series(link, tau_grid, substeps=None, backend=None, scenario=""):
    """End-to-end series ``beta = beta_a * beta_b``.

    ``beta1`` collects both Doppler factors and ``beta2`` both wells, so
    ``beta2 = sqrt((1 - alpha_1/r1) / (1 - alpha_2/r2))``.
    """
    s = beta_b_series(link, tau_grid, substeps, backend)
    ba, sr, wa = beta_a(link), link.sr_factor, link.well_a
    return replace(
        s,
        beta=ba * s.beta, beta1=sr * s.beta1, beta2=wa * s.beta2,
        B=ba * s.B, B1=sr * s.B1, B2=wa * s.B2, scenario=scenario,
    )


def fsp_point_interstellar(link, phi):
    """``(beta, beta1, beta2)`` at true anomaly ``phi`` of the receiver."""
    b1, b2 = link.components_b(phi)
    beta1, beta2 = link.sr_factor * b1, link.well_a * b2
    return beta1 * beta2, beta1, beta2
