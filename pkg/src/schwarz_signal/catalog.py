"""Physical constants, reference bodies and named scenario presets.

Preset ids are a stable CLI contract. Presets serialise to JSON with SI units
and snake_case keys; ``ScenarioPreset.from_dict(p.to_dict()) == p``.
"""

import json
import math
from dataclasses import dataclass, field, replace
from functools import lru_cache

from .errors import ConfigError, InsideHorizonError

G = 6.67430e-11  # m^3 kg^-1 s^-2, CODATA 2018
C = 299_792_458.0  # m/s, exact

M_SUN = 1.9891e30  # kg
R_SUN = 6.955e8  # m


@dataclass(frozen=True)
class PhysicalConstants:
    G: float = G
    c: float = C


CONSTANTS = PhysicalConstants()


def schwarzschild_length(mass):
    """``2 G M / c**2`` in metres."""
    return 2.0 * G * mass / C**2


@dataclass(frozen=True)
class GravBody:
    """A static, spherically symmetric central mass.

    ``alpha`` is filled from the mass when omitted. An explicit ``alpha=0.0``
    builds a flat-space proxy: Newtonian gravity (``GM``) still shapes orbits
    but the metric is Minkowski, which is how the special-relativity limits
    are exercised.
    """

    name: str
    mass: float
    radius: float
    alpha: float = None

    def __post_init__(self):
        if not (self.mass > 0 and self.radius > 0):
            raise ConfigError(f"body {self.name!r}: mass and radius must be positive")
        expected = schwarzschild_length(self.mass)
        if self.alpha is None:
            object.__setattr__(self, "alpha", expected)
        elif self.alpha != 0.0 and abs(self.alpha - expected) > 1e-12 * expected:
            raise ConfigError(
                f"body {self.name!r}: alpha {self.alpha!r} does not match 2GM/c^2 = {expected!r}"
            )
        if not self.alpha < self.radius:
            raise ConfigError(f"body {self.name!r}: radius inside its Schwarzschild length (black hole)")

    @property
    def gm(self):
        return G * self.mass

    @property
    def is_flat(self):
        return self.alpha == 0.0

    def flat(self):
        """Same mass and radius with the metric switched off."""
        return replace(self, name=f"{self.name}_flat", alpha=0.0)

    def to_dict(self):
        return {"name": self.name, "mass": self.mass, "radius": self.radius, "alpha": self.alpha}

    @classmethod
    def from_dict(cls, d):
        _reject_unknown(d, {"name", "mass", "radius", "alpha"}, "body")
        try:
            return cls(str(d["name"]), float(d["mass"]), float(d["radius"]),
                       None if d.get("alpha") is None else float(d["alpha"]))
        except KeyError as exc:
            raise ConfigError(f"body: missing key {exc.args[0]!r}") from None


def builtin_bodies():
    """The sun, a sun-mass white dwarf and a 2.01 solar-mass neutron star."""
    return [
        GravBody("sun", M_SUN, R_SUN),
        GravBody("white_dwarf", M_SUN, 0.009 * R_SUN),
        GravBody("neutron_star", 2.01 * M_SUN, 1.2e4),
    ]


def body(name):
    for b in builtin_bodies():
        if b.name == name:
            return b
    raise ConfigError(f"unknown body {name!r}")


# -- presets -----------------------------------------------------------------

_TRAJECTORY_KEYS = {
    "straight": {"r0", "u_h"},
    "conic": {"e", "a", "phi0"},
    "interstellar": {"v_h", "e", "a", "phi0"},
    "static": {"r2"},
}
_PRESET_KEYS = {"id", "kind", "bodies", "r1", "trajectory", "duration", "resolution"}


def _reject_unknown(d, allowed, what):
    if not isinstance(d, dict):
        raise ConfigError(f"{what}: expected an object, got {type(d).__name__}")
    extra = set(d) - allowed
    if extra:
        raise ConfigError(f"{what}: unknown keys {sorted(extra)}")


@dataclass(frozen=True)
class ScenarioPreset:
    """A named, fully specified scenario.

    ``bodies`` holds one body, or ``(star_a, star_b)`` for the interstellar
    kind. ``r1`` is the transmitter radius in the (first) host body's well.
    ``trajectory`` holds the kind-specific parameters in SI units.
    """

    id: str
    kind: str
    bodies: tuple
    r1: float
    trajectory: dict = field(hash=False)
    duration: float
    resolution: int

    def __post_init__(self):
        if self.kind not in _TRAJECTORY_KEYS:
            raise ConfigError(f"preset {self.id!r}: unknown kind {self.kind!r}")
        want = _TRAJECTORY_KEYS[self.kind]
        if set(self.trajectory) != want:
            raise ConfigError(
                f"preset {self.id!r}: trajectory keys {sorted(self.trajectory)} != {sorted(want)}"
            )
        nb = 2 if self.kind == "interstellar" else 1
        if len(self.bodies) != nb:
            raise ConfigError(f"preset {self.id!r}: {self.kind} needs {nb} bodies")
        if not self.r1 > self.bodies[0].alpha:
            raise InsideHorizonError(self.r1, self.bodies[0].alpha)
        if not self.duration > 0:
            raise ConfigError(f"preset {self.id!r}: duration must be positive")
        if int(self.resolution) != self.resolution or self.resolution < 2:
            raise ConfigError(f"preset {self.id!r}: resolution must be an integer >= 2")

    @property
    def body(self):
        return self.bodies[-1]

    def build(self):
        """Instantiate the trajectory object this preset describes."""
        from . import conic, engine, interstellar, straight

        t = self.trajectory
        if self.kind == "straight":
            return straight.StraightTrajectory(self.body, self.r1, t["r0"], t["u_h"])
        if self.kind == "static":
            return engine.StaticReceiver(self.body, self.r1, t["r2"])
        if self.kind == "conic":
            orbit = conic.ConicOrbit.from_axis(self.body, t["e"], t["a"], t["phi0"])
            return conic.ConicTrajectory(orbit, conic.OrbitGeometry(self.r1))
        orbit = conic.ConicOrbit.from_axis(self.bodies[1], t["e"], t["a"], t["phi0"])
        return interstellar.InterstellarLink(self.bodies[0], self.r1, t["v_h"], orbit)

    def to_dict(self):
        return {
            "id": self.id,
            "kind": self.kind,
            "bodies": [b.to_dict() for b in self.bodies],
            "r1": self.r1,
            "trajectory": dict(self.trajectory),
            "duration": self.duration,
            "resolution": self.resolution,
        }

    @classmethod
    def from_dict(cls, d):
        _reject_unknown(d, _PRESET_KEYS, "preset")
        missing = _PRESET_KEYS - set(d)
        if missing:
            raise ConfigError(f"preset: missing keys {sorted(missing)}")
        traj = d["trajectory"]
        _reject_unknown(traj, _TRAJECTORY_KEYS.get(d["kind"], set()), "trajectory")
        return cls(
            id=str(d["id"]),
            kind=d["kind"],
            bodies=tuple(GravBody.from_dict(b) for b in d["bodies"]),
            r1=float(d["r1"]),
            trajectory={k: float(v) for k, v in traj.items()},
            duration=float(d["duration"]),
            resolution=int(d["resolution"]),
        )

    def to_json(self, **kw):
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_json(cls, text):
        try:
            d = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"preset JSON: {exc}") from None
        return cls.from_dict(d)


U_ESCAPE = 16_700.0  # third cosmic velocity, m/s
V_INTERSTELLAR = 1.0e7  # relative speed of the two star systems, m/s
TONE_FIG8 = 1.0e5  # Hz
_SHORT = {"sun": "sun", "white_dwarf": "wd", "neutron_star": "ns"}


def _conic_duration(b, e, a, phi0):
    from .conic import ConicOrbit, arc_proper_time

    orbit = ConicOrbit.from_axis(b, e, a, phi0)
    if e < 1:
        return arc_proper_time(orbit, phi0, phi0 + 2.0 * math.pi)
    return arc_proper_time(orbit, phi0, -phi0)


@lru_cache(maxsize=None)
def _presets():
    from .conic import ConicOrbit, default_phi0

    bodies = builtin_bodies()
    sun, wd, ns = bodies
    out = []

    def straight(pid, b, r1, r0, duration=250.0, resolution=4096):
        out.append(ScenarioPreset(pid, "straight", (b,), r1, {"r0": r0, "u_h": U_ESCAPE},
                                  duration, resolution))

    for tag, b in zip("abc", bodies):
        straight(f"fig5{tag}", b, 2 * b.radius, 5 * b.radius)
    for tag, b in zip("def", bodies):
        straight(f"fig5{tag}", b, 2 * b.radius, 500 * b.radius)
    # FFT windows: receiver starts at 4R, tone 1e4 Hz sampled at 2.5x
    for b in bodies:
        straight(f"fig5fft_{_SHORT[b.name]}", b, 2 * b.radius, 4 * b.radius,
                 duration=50.0, resolution=1_250_001)
    straight("fig6_ns", ns, 2 * ns.radius, 5 * ns.radius)

    shapes = {"ellipse": (0.2, 4096), "parabola": (1.0, 2**18), "hyperbola": (2.0, 2**14)}
    for b in bodies:
        prefix = "fig7" if b is sun else f"fig7_{_SHORT[b.name]}"
        for shape, (e, res) in shapes.items():
            a = 5 * b.radius
            phi0 = default_phi0(e)
            out.append(ScenarioPreset(
                f"{prefix}_{shape}", "conic", (b,), 2 * b.radius,
                {"e": e, "a": a, "phi0": phi0}, _conic_duration(b, e, a, phi0), res))

    a = 5 * ns.radius
    period = ConicOrbit.from_axis(ns, 0.0167, a, 0.0).newtonian_period
    duration = 1.0e4 * period
    out.append(ScenarioPreset(
        "fig8_ns_ellipse", "conic", (ns,), 2 * ns.radius,
        {"e": 0.0167, "a": a, "phi0": 0.0}, duration, int(round(duration * 2.5 * TONE_FIG8)) + 1))

    for src in bodies:
        for dst in bodies:
            out.append(ScenarioPreset(
                f"fig9_{_SHORT[src.name]}_{_SHORT[dst.name]}", "interstellar", (src, dst),
                2 * src.radius,
                {"v_h": V_INTERSTELLAR, "e": 0.0167, "a": 5 * dst.radius, "phi0": 0.0},
                10.0, 2**17 + 1 if dst is ns else 4096))

    out.append(ScenarioPreset("static_ns", "static", (ns,), 2 * ns.radius,
                              {"r2": 5 * ns.radius}, 1.0, 4096))
    return tuple(out)


def builtin_presets():
    """All named presets, in a stable order."""
    return list(_presets())


def preset(pid):
    for p in _presets():
        if p.id == pid:
            return p
    raise ConfigError(f"unknown preset {pid!r}; try one of {[p.id for p in _presets()]}")
