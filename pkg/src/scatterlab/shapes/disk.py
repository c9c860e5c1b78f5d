"""Disk shape in the plane."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Self

import numpy as np

from scatterlab.constants import BOUNDARY_TOLERANCE
from scatterlab.shapes.base import (
    BoundarySample,
    Shape,
    ShapeError,
    as_float_tuple,
    as_points,
    check_sample_count,
    rotation_matrix,
)

if TYPE_CHECKING:
    from numpy.typing import ArrayLike


@dataclass(frozen=True, kw_only=True)
class Disk(Shape):
    """Open disk {|x - center| < radius}."""

    type: str = "disk"

    center: tuple[float, ...] = (0.0, 0.0)
    radius: float = 1.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "center", as_float_tuple(self.center, 2, "center"))
        if not self.radius > 0:
            msg = f"disk radius must be positive, got {self.radius}"
            raise ShapeError(msg)

    @property
    def dimension(self) -> int:
        return 2

    def reference_point(self) -> np.ndarray:
        return np.array(self.center)

    def contains(self, points: ArrayLike) -> np.ndarray:
        pts = as_points(points, 2)
        return np.linalg.norm(pts - self.reference_point(), axis=1) < self.radius - BOUNDARY_TOLERANCE

    def distance_to_boundary(self, points: ArrayLike) -> np.ndarray:
        pts = as_points(points, 2)
        return np.abs(self.radius - np.linalg.norm(pts - self.reference_point(), axis=1))

    def boundary_sample(self, count: int) -> BoundarySample:
        check_sample_count(count)
        t = 2 * np.pi * np.arange(count) / count
        normals = np.column_stack([np.cos(t), np.sin(t)])
        return BoundarySample(
            points=self.reference_point() + self.radius * normals,
            normals=normals,
            corners=np.zeros(count, dtype=bool),
            weights=np.full(count, 2 * np.pi * self.radius / count),
        )

    def bounding_box(self) -> tuple[np.ndarray, np.ndarray]:
        center = self.reference_point()
        return center - self.radius, center + self.radius

    def measure(self) -> float:
        return math.pi * self.radius**2

    def perimeter(self) -> float:
        return 2 * math.pi * self.radius

    def rotated(self, angle: float) -> Self:
        center = rotation_matrix(angle) @ self.reference_point()
        return type(self)(center=tuple(center), radius=self.radius)
