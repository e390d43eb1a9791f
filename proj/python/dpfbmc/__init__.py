"""Multicarrier waveform lab: CP-OFDM, FBMC/OQAM, dual-polarization FBMC."""

from ._core import *  # noqa: F401,F403
from ._core import ConfigError, run

__all__ = [name for name in dir() if not name.startswith("_")]
