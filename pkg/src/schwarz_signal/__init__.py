"""Frequency shifts of signals exchanged in Schwarzschild spacetime."""

from .catalog import (C, CONSTANTS, G, GravBody, ScenarioPreset, builtin_bodies,
                      builtin_presets, preset)
from .errors import (ConfigError, InsideHorizonError, PhysicsDomainError,
                     SchwarzSignalError, SuperluminalError)
from .metric import (KinematicState, dtau_dT, fsp_point, gamma_g, gfsp_static,
                     metric_factor, sr_doppler)
from .series import FspSample, FspSeries

__version__ = "0.1.0"
