"""Ball in three dimensions."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from scatterlab.constants import BOUNDARY_TOLERANCE
from scatterlab.shapes.base import BoundarySample, Shape, ShapeError, as_float_tuple, as_points, check_sample_count

if TYPE_CHECKING:
    from numpy.typing import ArrayLike

_GOLDEN_ANGLE = math.pi * (3 - math.sqrt(5))


@dataclass(frozen=True, kw_only=True)
class Ball(Shape):
    """Open ball {|x - center| < radius} in R^3."""

    type: str = "ball"

    center: tuple[float, ...] = (0.0, 0.0, 0.0)
    radius: float = 1.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "center", as_float_tuple(self.center, 3, "center"))
        if not self.radius > 0:
            msg = f"ball radius must be positive, got {self.radius}"
            raise ShapeError(msg)

    @property
    def dimension(self) -> int:
        return 3

    def reference_point(self) -> np.ndarray:
        return np.array(self.center)

    def contains(self, points: ArrayLike) -> np.ndarray:
        pts = as_points(points, 3)
        return np.linalg.norm(pts - self.reference_point(), axis=1) < self.radius - BOUNDARY_TOLERANCE

    def distance_to_boundary(self, points: ArrayLike) -> np.ndarray:
        pts = as_points(points, 3)
        return np.abs(self.radius - np.linalg.norm(pts - self.reference_point(), axis=1))

    def boundary_sample(self, count: int) -> BoundarySample:
        """Fibonacci lattice on the sphere with equal area weights."""
        check_sample_count(count)
        index = np.arange(count)
        z = 1 - 2 * (index + 0.5) / count
        ring = np.sqrt(1 - z**2)
        phi = index * _GOLDEN_ANGLE
        normals = np.column_stack([ring * np.cos(phi), ring * np.sin(phi), z])
        return BoundarySample(
            points=self.reference_point() + self.radius * normals,
            normals=normals,
            corners=np.zeros(count, dtype=bool),
            weights=np.full(count, self.perimeter() / count),
        )

    def bounding_box(self) -> tuple[np.ndarray, np.ndarray]:
        center = self.reference_point()
        return center - self.radius, center + self.radius

    def measure(self) -> float:
        return 4 / 3 * math.pi * self.radius**3

    def perimeter(self) -> float:
        return 4 * math.pi * self.radius**2
