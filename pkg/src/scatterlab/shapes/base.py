"""Base class for inhomogeneity shapes."""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from dataclasses import asdict, dataclass
from typing import TYPE_CHECKING, Any, NamedTuple, Self

import numpy as np
from scipy.spatial import cKDTree

from scatterlab.constants import MIN_BOUNDARY_SAMPLES

if TYPE_CHECKING:
    from numpy.typing import ArrayLike

# Boundary sample density used when a shape has no closed-form distance
DISTANCE_SAMPLES = 8192


class ShapeError(ValueError):
    """Raised when a shape is invalid or queried with points of the wrong dimension."""


class BoundarySample(NamedTuple):
    """Points on the boundary with outward normals and arc-length quadrature weights.

    Corner points carry a bisector pseudo-normal and zero weight.
    """

    points: np.ndarray
    normals: np.ndarray
    corners: np.ndarray
    weights: np.ndarray


@dataclass(frozen=True, kw_only=True)
class Shape(ABC):
    """Base class for all shape descriptors of the inhomogeneity D.

    All shapes provide a type tag so that they can round-trip through JSON.
    Additional fields are defined by specific shape subclasses.
    """

    type: str

    @property
    @abstractmethod
    def dimension(self) -> int: ...

    @abstractmethod
    def reference_point(self) -> np.ndarray:
        """Reference point used for radial contrast profiles."""

    @abstractmethod
    def contains(self, points: ArrayLike) -> np.ndarray:
        """Return a boolean mask, true for points in the open set D.

        Points within the boundary tolerance of the boundary resolve to false.
        """

    @abstractmethod
    def boundary_sample(self, count: int) -> BoundarySample: ...

    @abstractmethod
    def bounding_box(self) -> tuple[np.ndarray, np.ndarray]: ...

    @abstractmethod
    def measure(self) -> float:
        """Area (2D) or volume (3D) of D."""

    @abstractmethod
    def perimeter(self) -> float:
        """Length (2D) or area (3D) of the boundary."""

    @property
    def diameter(self) -> float:
        low, high = self.bounding_box()
        return float(np.linalg.norm(high - low))

    def distance_to_boundary(self, points: ArrayLike) -> np.ndarray:
        """Approximate distance to the boundary from a dense boundary sample."""
        pts = as_points(points, self.dimension)
        sample = self.boundary_sample(DISTANCE_SAMPLES)
        distances, _ = cKDTree(sample.points).query(pts)
        return np.asarray(distances, dtype=float)

    def rotated(self, angle: float) -> Self:
        """Return the shape rotated about the origin by angle (radians)."""
        msg = f"rotation is not supported for {self.type} shapes"
        raise ShapeError(msg)

    def to_data(self) -> dict[str, Any]:
        """Serialize to the JSON object {"type": ..., parameters...}."""
        return {k: v for k, v in asdict(self).items() if v is not None}


def as_points(points: ArrayLike, dimension: int) -> np.ndarray:
    """Coerce points to a float array of shape (N, dimension).

    Raises:
        ShapeError: If the trailing axis does not match the dimension
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts[np.newaxis, :]
    if pts.ndim != 2 or pts.shape[1] != dimension:  # noqa: PLR2004
        msg = f"expected points of dimension {dimension}, got array of shape {np.shape(points)}"
        raise ShapeError(msg)
    if not np.all(np.isfinite(pts)):
        msg = "points must be finite"
        raise ShapeError(msg)
    return pts


def rotation_matrix(angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, -s], [s, c]])


def check_sample_count(count: int) -> None:
    if count < MIN_BOUNDARY_SAMPLES:
        msg = f"boundary sample count must be at least {MIN_BOUNDARY_SAMPLES}, got {count}"
        raise ShapeError(msg)


def as_float_tuple(value: Any, length: int, name: str) -> tuple[float, ...]:
    """Convert JSON lists to tuples and check their length."""
    result = tuple(float(v) for v in value)
    if len(result) != length:
        msg = f"{name} must have {length} components, got {len(result)}"
        raise ShapeError(msg)
    return result
