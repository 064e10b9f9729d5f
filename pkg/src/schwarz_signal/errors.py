"""Exception types.

Physics-domain failures (horizon, superluminal speeds, invalid orbits) derive
from :class:`PhysicsDomainError`; malformed input derives from
:class:`ConfigError`. The CLI maps the two families to distinct exit codes.
"""


class SchwarzSignalError(Exception):
    """Base class for all package errors."""


class PhysicsDomainError(SchwarzSignalError, ValueError):
    """A physical precondition does not hold."""


class InsideHorizonError(PhysicsDomainError):
    def __init__(self, r, alpha):
        super().__init__(
            f"inside-horizon: radius {r!r} m is not outside the Schwarzschild "
            f"length {alpha!r} m"
        )


class SuperluminalError(PhysicsDomainError):
    def __init__(self, speed, what="speed"):
        super().__init__(f"superluminal: {what} {speed!r} m/s is not below c")


class OpenBranchError(PhysicsDomainError):
    def __init__(self, phi, e):
        super().__init__(
            f"open-branch: true anomaly {phi!r} rad lies beyond the asymptote "
            f"of the e={e!r} conic (1 + e cos phi <= 0)"
        )


class DegenerateGeometryError(PhysicsDomainError):
    """Transmitter and receiver coincide, so the sight line is undefined."""


class RelativisticOrbitError(PhysicsDomainError):
    """The proper-time radicand of a conic orbit is not positive."""


class WarpRangeError(PhysicsDomainError):
    """Warped sample times fall outside the input signal's span."""


class UndersampledError(SchwarzSignalError, ValueError):
    """Phase steps too close to pi to unwrap unambiguously."""


class IntegrationError(PhysicsDomainError):
    """The time-map integration produced a non-finite or non-monotone state."""


class ConfigError(SchwarzSignalError, ValueError):
    """Invalid run configuration or preset document."""
