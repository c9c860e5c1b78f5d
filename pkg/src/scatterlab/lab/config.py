"""Experiment configuration."""

from __future__ import annotations

import hashlib
import json
import math
from pathlib import Path
from typing import Any, Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, PositiveFloat, PositiveInt, field_validator, model_validator

from scatterlab.constants import (
    DEFAULT_FARFIELD_DIRECTIONS,
    MAX_GRID_CELLS,
    SOLVER_MAX_ITERATIONS,
    SOLVER_RESTART,
    SOLVER_TOLERANCE,
)
from scatterlab.geometry import Contrast
from scatterlab.shapes import Shape, ShapeError, create_shape_from_data
from scatterlab.waves import IncidentWave, WaveError, create_wave_from_data

ExperimentKind = Literal[
    "sweep",
    "jump_probe",
    "radial_nonscatter",
    "corner_scatter",
    "nonradiating_source",
    "stationary_phase",
]

# Kinds whose conclusions rest on grid convergence
CONVERGENCE_KINDS = {"corner_scatter", "nonradiating_source"}
SWEEP_KINDS = {"sweep", "corner_scatter"}


class ConfigError(ValueError):
    """Raised when an experiment configuration cannot be loaded or used."""


class KRange(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    start: PositiveFloat
    stop: PositiveFloat
    step: PositiveFloat

    @model_validator(mode="after")
    def _check_increasing(self) -> KRange:
        if self.stop <= self.start:
            msg = f"k range must be increasing, got start={self.start} stop={self.stop}"
            raise ValueError(msg)
        return self

    def values(self) -> np.ndarray:
        """Wavenumbers start, start + step, ... up to and including stop, never beyond it."""
        count = math.floor((self.stop - self.start) / self.step + 1e-9)
        return np.round(self.start + self.step * np.arange(count + 1), 12)


class ProbeSettings(BaseModel):
    """Boundary points for jump probes: explicit points, polygon corners, and/or a boundary sample."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    etas: list[PositiveFloat] = Field(default_factory=lambda: [0.1, 0.05, 0.02, 0.01, 0.005, 0.002, 0.001])
    points: list[list[float]] = Field(default_factory=list)
    corners: bool = False
    boundary_count: int = Field(default=0, ge=0)
    density: float = 1.0


class RadialSettings(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    max_order: int = Field(default=1, ge=0)
    k_min: PositiveFloat = 0.5
    k_max: PositiveFloat = 12.0
    roots_per_order: dict[int, int] = Field(default_factory=lambda: {0: 3, 1: 2})
    offset: PositiveFloat = 0.2
    determinant_samples: PositiveInt = 2000


class SourceSettings(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    k: PositiveFloat = 3.0
    corner_shape: dict[str, Any] = Field(
        default_factory=lambda: {"type": "polygon", "vertices": [[-0.5, -0.5], [0.5, -0.5], [0.5, 0.5], [-0.5, 0.5]]}
    )


class StationarySettings(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    ks: list[PositiveFloat] = Field(default_factory=lambda: [10.0, 20.0, 40.0, 80.0])
    densities: PositiveInt = 5
    max_order: PositiveInt = 4
    ripple: PositiveFloat = 0.4
    radii: PositiveInt = 256
    angles: PositiveInt = 4


class ExperimentConfig(BaseModel):
    """One batch experiment. Every output is a deterministic function of this config."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    kind: ExperimentKind
    shape: dict[str, Any] = Field(default_factory=lambda: {"type": "disk", "center": [0.0, 0.0], "radius": 1.0})
    contrast: dict[str, Any] = Field(default_factory=lambda: {"type": "constant", "n": 2.0})
    waves: list[dict[str, Any]] = Field(default_factory=list)
    k_range: KRange | None = None
    levels: list[PositiveFloat] = Field(default_factory=lambda: [0.02], min_length=1)
    tolerance: PositiveFloat = SOLVER_TOLERANCE
    max_iterations: PositiveInt = SOLVER_MAX_ITERATIONS
    restart: PositiveInt = SOLVER_RESTART
    subsamples: PositiveInt = 1
    far_field_directions: PositiveInt = DEFAULT_FARFIELD_DIRECTIONS
    output_dir: str | None = None
    seed: int = 0
    max_cells: PositiveInt = MAX_GRID_CELLS
    max_solves: PositiveInt | None = None
    floor: PositiveFloat | None = None
    probe: ProbeSettings = Field(default_factory=ProbeSettings)
    radial: RadialSettings = Field(default_factory=RadialSettings)
    source: SourceSettings = Field(default_factory=SourceSettings)
    stationary: StationarySettings = Field(default_factory=StationarySettings)

    @field_validator("shape")
    @classmethod
    def _check_shape(cls, value: dict[str, Any]) -> dict[str, Any]:
        try:
            create_shape_from_data(value)
        except ShapeError as e:
            raise ValueError(str(e)) from e
        return value

    @field_validator("contrast")
    @classmethod
    def _check_contrast(cls, value: dict[str, Any]) -> dict[str, Any]:
        try:
            Contrast.from_data(value)
        except (KeyError, TypeError) as e:
            msg = f"invalid contrast {value}: missing or malformed {e}"
            raise ValueError(msg) from e
        return value

    @field_validator("waves")
    @classmethod
    def _check_waves(cls, value: list[dict[str, Any]]) -> list[dict[str, Any]]:
        for wave in value:
            if "k" in wave:
                msg = "wave templates take their wavenumber from the k range; drop the 'k' field"
                raise ValueError(msg)
            try:
                create_wave_from_data({**wave, "k": 1.0})
            except WaveError as e:
                raise ValueError(str(e)) from e
        return value

    @field_validator("levels")
    @classmethod
    def _sort_levels(cls, value: list[float]) -> list[float]:
        if len(set(value)) != len(value):
            msg = "grid levels must be distinct"
            raise ValueError(msg)
        return sorted(value, reverse=True)

    @model_validator(mode="after")
    def _check_kind(self) -> ExperimentConfig:
        if self.kind in CONVERGENCE_KINDS and len(self.levels) < 2:  # noqa: PLR2004
            msg = f"{self.kind} experiments assert convergence and need at least 2 grid levels"
            raise ValueError(msg)
        if self.kind in SWEEP_KINDS:
            if self.k_range is None:
                msg = f"{self.kind} experiments need a k_range"
                raise ValueError(msg)
            if not self.waves:
                msg = f"{self.kind} experiments need at least one incident wave"
                raise ValueError(msg)
        if self.kind == "radial_nonscatter":
            shape = self.build_shape()
            if shape.type not in ("disk", "ball") or not Contrast.from_data(self.contrast).is_constant:
                msg = "radial_nonscatter needs a disk or ball with constant contrast"
                raise ValueError(msg)
            if any(self.shape.get("center", [0.0])):
                msg = "radial_nonscatter needs the disk or ball centred at the origin"
                raise ValueError(msg)
        if self.kind == "nonradiating_source" and self.build_shape().type != "disk":
            msg = "nonradiating_source places its bump on a disk"
            raise ValueError(msg)
        if self.kind == "jump_probe" and not (self.probe.points or self.probe.corners or self.probe.boundary_count):
            msg = "jump_probe needs probe points, corners or a boundary_count"
            raise ValueError(msg)
        return self

    def build_shape(self) -> Shape:
        return create_shape_from_data(self.shape)

    def build_contrast(self) -> Contrast:
        return Contrast.from_data(self.contrast)

    def build_waves(self, k: float) -> list[IncidentWave]:
        return [create_wave_from_data({**wave, "k": k}) for wave in self.waves]

    def wave_labels(self) -> list[str]:
        return [f"{wave['type']}{index}" for index, wave in enumerate(self.waves)]

    def config_hash(self) -> str:
        """SHA-256 of the canonical JSON of the settings that determine the results."""
        data = self.model_dump(mode="json", exclude={"output_dir", "max_cells", "max_solves"})
        canonical = json.dumps(data, sort_keys=True)
        return hashlib.sha256(canonical.encode()).hexdigest()


def load_config(config: str | Path | dict[str, Any]) -> ExperimentConfig:
    """Load an experiment configuration from a JSON file path or a dict.

    Args:
        config: Path to a JSON file, or the parsed configuration

    Returns:
        The validated ExperimentConfig

    Raises:
        ConfigError: If the file cannot be read or is not a JSON object
        pydantic.ValidationError: If the configuration is invalid
    """
    if isinstance(config, dict):
        return ExperimentConfig.model_validate(config)
    return ExperimentConfig.model_validate(read_config_data(config))


def read_config_data(path: str | Path) -> dict[str, Any]:
    """Read the raw JSON object of a config file, before validation."""
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except FileNotFoundError as e:
        msg = f"config file not found: {path}"
        raise ConfigError(msg) from e
    except json.JSONDecodeError as e:
        msg = f"invalid JSON in config file {path}: {e}"
        raise ConfigError(msg) from e
    if not isinstance(data, dict):
        msg = f"config file {path} must hold a JSON object"
        raise ConfigError(msg)
    return data
