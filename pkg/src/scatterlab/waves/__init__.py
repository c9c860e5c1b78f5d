"""Incident-wave families and the stationary-phase approximation."""

from typing import Any

import numpy as np
from numpy.typing import ArrayLike

from scatterlab.waves.base import IncidentWave, WaveError
from scatterlab.waves.helmholtz_check import verify_helmholtz
from scatterlab.waves.herglotz_wave import FourierDensity, HerglotzWave
from scatterlab.waves.plane_wave import PlaneWave
from scatterlab.waves.point_source import PointSource
from scatterlab.waves.stationary_phase import (
    PairResidualReport,
    StationaryPhaseLadder,
    StationaryPhaseResult,
    nonscattering_pair_residual,
    stationary_phase_approximation,
    stationary_phase_farfield,
    stationary_phase_ladder,
)

__all__ = [
    "WAVE_TYPE_MAP",
    "FourierDensity",
    "HerglotzWave",
    "IncidentWave",
    "PairResidualReport",
    "PlaneWave",
    "PointSource",
    "StationaryPhaseLadder",
    "StationaryPhaseResult",
    "WaveError",
    "create_wave_from_data",
    "eval_incident",
    "nonscattering_pair_residual",
    "stationary_phase_approximation",
    "stationary_phase_farfield",
    "stationary_phase_ladder",
    "verify_helmholtz",
]

WAVE_TYPE_MAP: dict[str, type[IncidentWave]] = {
    "herglotz": HerglotzWave,
    "plane": PlaneWave,
    "point_source": PointSource,
}


def create_wave_from_data(wave_data: dict[str, Any]) -> IncidentWave:
    """Create an incident wave from its JSON object {"type": ..., "k": ..., parameters...}."""
    wave_type = wave_data.get("type")
    if wave_type not in WAVE_TYPE_MAP:
        msg = f"unknown wave type {wave_type!r}, expected one of {sorted(WAVE_TYPE_MAP)}"
        raise WaveError(msg)
    try:
        return WAVE_TYPE_MAP[wave_type](**wave_data)
    except TypeError as e:
        msg = f"invalid parameters for {wave_type} wave: {e}"
        raise WaveError(msg) from e


def eval_incident(wave: IncidentWave, x: ArrayLike) -> np.ndarray:
    """Evaluate the incident field at points x, shape (N, m)."""
    return wave.evaluate(x)
