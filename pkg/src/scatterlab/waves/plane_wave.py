"""Plane waves e^{ik ξ·x}."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Self

import numpy as np

from scatterlab.shapes.base import as_points
from scatterlab.waves.base import IncidentWave, WaveError

if TYPE_CHECKING:
    from numpy.typing import ArrayLike

_UNIT_TOLERANCE = 1e-9


@dataclass(frozen=True, kw_only=True)
class PlaneWave(IncidentWave):
    """Plane wave travelling in the unit direction ξ."""

    type: str = "plane"

    direction: tuple[float, ...] = (1.0, 0.0)

    def __post_init__(self) -> None:
        super().__post_init__()
        direction = tuple(float(c) for c in self.direction)
        object.__setattr__(self, "direction", direction)
        if len(direction) not in (2, 3):
            msg = f"plane wave direction must be 2D or 3D, got {len(direction)} components"
            raise WaveError(msg)
        if abs(math.hypot(*direction) - 1) > _UNIT_TOLERANCE:
            msg = f"plane wave direction must be a unit vector, got {direction}"
            raise WaveError(msg)

    @classmethod
    def from_angle(cls, k: float, angle: float) -> Self:
        """2D plane wave with direction (cos angle, sin angle)."""
        return cls(k=k, direction=(math.cos(angle), math.sin(angle)))

    @property
    def dimension(self) -> int:
        return len(self.direction)

    def evaluate(self, points: ArrayLike) -> np.ndarray:
        pts = as_points(points, self.dimension)
        return np.exp(1j * self.k * (pts @ np.array(self.direction)))
