"""Rotated ellipse in the plane."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Self

import numpy as np
from scipy.spatial import cKDTree

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

_DISTANCE_SEED_SAMPLES = 2048
_NEWTON_STEPS = 8


@dataclass(frozen=True, kw_only=True)
class Ellipse(Shape):
    """Ellipse with semi-axes (a, b) rotated counter-clockwise by `rotation` radians."""

    type: str = "ellipse"

    center: tuple[float, ...] = (0.0, 0.0)
    semi_axes: tuple[float, ...] = (1.0, 1.0)
    rotation: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "center", as_float_tuple(self.center, 2, "center"))
        object.__setattr__(self, "semi_axes", as_float_tuple(self.semi_axes, 2, "semi_axes"))
        if min(self.semi_axes) <= 0:
            msg = f"ellipse semi-axes must be positive, got {self.semi_axes}"
            raise ShapeError(msg)

    @property
    def dimension(self) -> int:
        return 2

    def reference_point(self) -> np.ndarray:
        return np.array(self.center)

    def _to_local(self, pts: np.ndarray) -> np.ndarray:
        return (pts - self.reference_point()) @ rotation_matrix(self.rotation)

    def _to_world(self, local: np.ndarray) -> np.ndarray:
        return local @ rotation_matrix(self.rotation).T + self.reference_point()

    def contains(self, points: ArrayLike) -> np.ndarray:
        a, b = self.semi_axes
        local = self._to_local(as_points(points, 2))
        level = np.sqrt((local[:, 0] / a) ** 2 + (local[:, 1] / b) ** 2)
        # |grad level| <= 1/min(a, b), so this keeps points within the tolerance out
        return level < 1.0 - BOUNDARY_TOLERANCE / min(a, b)

    def boundary_sample(self, count: int) -> BoundarySample:
        check_sample_count(count)
        a, b = self.semi_axes
        t = 2 * np.pi * np.arange(count) / count
        local = np.column_stack([a * np.cos(t), b * np.sin(t)])
        local_normals = np.column_stack([b * np.cos(t), a * np.sin(t)])
        speed = np.hypot(a * np.sin(t), b * np.cos(t))
        local_normals /= np.linalg.norm(local_normals, axis=1)[:, np.newaxis]
        return BoundarySample(
            points=self._to_world(local),
            normals=local_normals @ rotation_matrix(self.rotation).T,
            corners=np.zeros(count, dtype=bool),
            weights=speed * 2 * np.pi / count,
        )

    def distance_to_boundary(self, points: ArrayLike) -> np.ndarray:
        """Distance to the boundary, by nearest-sample seeding and Newton polish on the parameter."""
        a, b = self.semi_axes
        local = self._to_local(as_points(points, 2))
        seeds = 2 * np.pi * np.arange(_DISTANCE_SEED_SAMPLES) / _DISTANCE_SEED_SAMPLES
        seed_points = np.column_stack([a * np.cos(seeds), b * np.sin(seeds)])
        _, nearest = cKDTree(seed_points).query(local)
        t = seeds[nearest]
        for _ in range(_NEWTON_STEPS):
            dx = a * np.cos(t) - local[:, 0]
            dy = b * np.sin(t) - local[:, 1]
            gradient = -dx * a * np.sin(t) + dy * b * np.cos(t)
            curvature = (a * np.sin(t)) ** 2 + (b * np.cos(t)) ** 2 - dx * a * np.cos(t) - dy * b * np.sin(t)
            step = np.where(np.abs(curvature) > 0, gradient / np.where(curvature == 0, 1.0, curvature), 0.0)
            t = t - np.clip(step, -0.1, 0.1)
        return np.hypot(a * np.cos(t) - local[:, 0], b * np.sin(t) - local[:, 1])

    def bounding_box(self) -> tuple[np.ndarray, np.ndarray]:
        a, b = self.semi_axes
        c, s = math.cos(self.rotation), math.sin(self.rotation)
        half = np.array([math.hypot(a * c, b * s), math.hypot(a * s, b * c)])
        center = self.reference_point()
        return center - half, center + half

    def measure(self) -> float:
        a, b = self.semi_axes
        return math.pi * a * b

    def perimeter(self) -> float:
        # Ramanujan's second approximation
        a, b = self.semi_axes
        h = ((a - b) / (a + b)) ** 2
        return math.pi * (a + b) * (1 + 3 * h / (10 + math.sqrt(4 - 3 * h)))

    def rotated(self, angle: float) -> Self:
        center = rotation_matrix(angle) @ self.reference_point()
        return type(self)(center=tuple(center), semi_axes=self.semi_axes, rotation=self.rotation + angle)
