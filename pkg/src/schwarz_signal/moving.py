"""Frequency relation when both ends of the link move.

Each endpoint carries its own radius, Schwarzschild speed and the cosine of
the angle between its velocity and the local wave vector. The geometry that
produces those angles is the caller's business.
"""

from dataclasses import dataclass

import numpy as np

from .catalog import C
from .errors import InsideHorizonError, SuperluminalError


@dataclass(frozen=True)
class EndpointState:
    r: float
    u_g: float = 0.0
    cos_psi: float = 0.0

    def __post_init__(self):
        if not self.r > 0.0:
            raise ValueError(f"radius must be positive, got {self.r!r}")
        if not 0.0 <= self.u_g < C:
            raise SuperluminalError(self.u_g, "u_g")
        if not -1.0 <= self.cos_psi <= 1.0:
            raise ValueError(f"cos_psi must lie in [-1, 1], got {self.cos_psi!r}")

    def check(self, alpha):
        if not self.r > alpha:
            raise InsideHorizonError(self.r, alpha)
        return self


def _doppler(s):
    b = s.u_g / C
    return (1.0 - b * s.cos_psi) / np.sqrt((1.0 - b) * (1.0 + b))


def transmitter_correction(tx):
    """``omega_1 / omega_1'`` for a transmitter moving with state ``tx``.

    Converts the frequency in the transmitter's own frame to the one a static
    observer at the same radius would assign.
    """
    return float(1.0 / _doppler(tx))


def end_to_end_fsp(tx, rx, alpha):
    """``omega_2' / omega_1'`` between two moving endpoints.

    Parameters
    ----------
    tx, rx : EndpointState
        Transmitter and receiver states.
    alpha : float
        Schwarzschild length of the central body (m).

    Returns
    -------
    float
        Receiver Doppler over transmitter Doppler, times the static
        gravitational shift between ``tx.r`` and ``rx.r``.
    """
    tx.check(alpha)
    rx.check(alpha)
    grav = np.sqrt(((tx.r - alpha) / tx.r) / ((rx.r - alpha) / rx.r))
    return float(_doppler(rx) / _doppler(tx) * grav)
