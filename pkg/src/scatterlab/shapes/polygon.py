"""Simple counter-clockwise polygon in the plane."""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Any, Self

import numpy as np

from scatterlab.constants import BOUNDARY_TOLERANCE
from scatterlab.shapes.base import BoundarySample, Shape, ShapeError, as_points, check_sample_count, rotation_matrix

if TYPE_CHECKING:
    from numpy.typing import ArrayLike

MIN_VERTICES = 3
_COLLINEAR_TOLERANCE = 1e-12


@dataclass(frozen=True, kw_only=True)
class Polygon(Shape):
    """Polygon given by its vertex list in counter-clockwise order.

    The polygon must be simple and its vertices must not all be collinear.
    Vertices are the corner points flagged by `boundary_sample`.
    """

    type: str = "polygon"

    vertices: tuple[tuple[float, ...], ...] = ()

    def __post_init__(self) -> None:
        vertices = tuple(tuple(float(c) for c in vertex) for vertex in self.vertices)
        object.__setattr__(self, "vertices", vertices)
        if len(vertices) < MIN_VERTICES:
            msg = f"polygon needs at least {MIN_VERTICES} vertices, got {len(vertices)}"
            raise ShapeError(msg)
        if any(len(vertex) != 2 for vertex in vertices):  # noqa: PLR2004
            msg = "polygon vertices must be 2D points"
            raise ShapeError(msg)
        area = _signed_area(self._vertex_array())
        scale = float(np.ptp(self._vertex_array(), axis=0).max()) ** 2
        if abs(area) <= _COLLINEAR_TOLERANCE * scale:
            msg = "polygon vertices are collinear"
            raise ShapeError(msg)
        if area < 0:
            msg = "polygon vertices must be in counter-clockwise order"
            raise ShapeError(msg)
        if not _is_simple(self._vertex_array()):
            msg = "polygon edges intersect"
            raise ShapeError(msg)

    @property
    def dimension(self) -> int:
        return 2

    def _vertex_array(self) -> np.ndarray:
        return np.array(self.vertices, dtype=float)

    def _edges(self) -> tuple[np.ndarray, np.ndarray]:
        start = self._vertex_array()
        return start, np.roll(start, -1, axis=0)

    def reference_point(self) -> np.ndarray:
        """Area centroid."""
        start, end = self._edges()
        cross = start[:, 0] * end[:, 1] - end[:, 0] * start[:, 1]
        area = cross.sum() / 2
        return ((start + end) * cross[:, np.newaxis]).sum(axis=0) / (6 * area)

    def contains(self, points: ArrayLike) -> np.ndarray:
        pts = as_points(points, 2)
        start, end = self._edges()
        x, y = pts[:, 0:1], pts[:, 1:2]
        # even-odd ray casting along +x, points x edges
        straddles = (start[:, 1] > y) != (end[:, 1] > y)
        dy = np.where(end[:, 1] == start[:, 1], 1.0, end[:, 1] - start[:, 1])
        crossing_x = start[:, 0] + (y - start[:, 1]) * (end[:, 0] - start[:, 0]) / dy
        inside = np.count_nonzero(straddles & (x < crossing_x), axis=1) % 2 == 1
        return inside & (self.distance_to_boundary(pts) > BOUNDARY_TOLERANCE)

    def distance_to_boundary(self, points: ArrayLike) -> np.ndarray:
        pts = as_points(points, 2)
        start, end = self._edges()
        edge = end - start
        rel = pts[:, np.newaxis, :] - start[np.newaxis, :, :]
        t = np.clip((rel * edge).sum(axis=2) / (edge * edge).sum(axis=1), 0.0, 1.0)
        nearest = start + t[:, :, np.newaxis] * edge
        return np.linalg.norm(pts[:, np.newaxis, :] - nearest, axis=2).min(axis=1)

    def boundary_sample(self, count: int) -> BoundarySample:
        """Sample vertices (flagged, zero weight) plus edge midpoints of a length-proportional subdivision.

        Edge points use the composite midpoint rule, so the weights sum to the perimeter.
        """
        check_sample_count(count)
        start, end = self._edges()
        edge = end - start
        lengths = np.linalg.norm(edge, axis=1)
        edge_normals = np.column_stack([edge[:, 1], -edge[:, 0]]) / lengths[:, np.newaxis]
        per_edge = np.maximum(1, np.round((count - len(start)) * lengths / lengths.sum()).astype(int))

        bisectors = edge_normals + np.roll(edge_normals, 1, axis=0)
        bisectors /= np.linalg.norm(bisectors, axis=1)[:, np.newaxis]

        points, normals, corners, weights = [], [], [], []
        for i, pieces in enumerate(per_edge):
            points.append(start[i][np.newaxis, :])
            normals.append(bisectors[i][np.newaxis, :])
            corners.append([True])
            weights.append([0.0])
            fractions = (np.arange(pieces) + 0.5) / pieces
            points.append(start[i] + fractions[:, np.newaxis] * edge[i])
            normals.append(np.tile(edge_normals[i], (pieces, 1)))
            corners.append([False] * pieces)
            weights.append([lengths[i] / pieces] * pieces)
        return BoundarySample(
            points=np.vstack(points),
            normals=np.vstack(normals),
            corners=np.concatenate([np.asarray(c, dtype=bool) for c in corners]),
            weights=np.concatenate([np.asarray(w, dtype=float) for w in weights]),
        )

    def bounding_box(self) -> tuple[np.ndarray, np.ndarray]:
        vertices = self._vertex_array()
        return vertices.min(axis=0), vertices.max(axis=0)

    def measure(self) -> float:
        return _signed_area(self._vertex_array())

    def perimeter(self) -> float:
        start, end = self._edges()
        return float(np.linalg.norm(end - start, axis=1).sum())

    def rotated(self, angle: float) -> Self:
        vertices = self._vertex_array() @ rotation_matrix(angle).T
        return type(self)(vertices=tuple(tuple(v) for v in vertices))

    def to_data(self) -> dict[str, Any]:
        return {"type": self.type, "vertices": [list(v) for v in self.vertices]}

    def is_axis_aligned_rectangle(self) -> bool:
        vertices = self._vertex_array()
        if len(vertices) != 4:  # noqa: PLR2004
            return False
        low, high = self.bounding_box()
        on_corners = np.isin(vertices[:, 0], [low[0], high[0]]) & np.isin(vertices[:, 1], [low[1], high[1]])
        return bool(on_corners.all()) and len({tuple(v) for v in vertices}) == 4  # noqa: PLR2004


def _signed_area(vertices: np.ndarray) -> float:
    x, y = vertices[:, 0], vertices[:, 1]
    return float((x * np.roll(y, -1) - np.roll(x, -1) * y).sum() / 2)


def _is_simple(vertices: np.ndarray) -> bool:
    """Check that no two non-adjacent edges intersect."""
    count = len(vertices)
    for i in range(count):
        p1, p2 = vertices[i], vertices[(i + 1) % count]
        for j in range(i + 1, count):
            if j == i or (j + 1) % count == i or (i + 1) % count == j:
                continue
            if _segments_intersect(p1, p2, vertices[j], vertices[(j + 1) % count]):
                return False
    return True


def _orientation(a: np.ndarray, b: np.ndarray, c: np.ndarray) -> float:
    return float((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]))


def _segments_intersect(p1: np.ndarray, p2: np.ndarray, q1: np.ndarray, q2: np.ndarray) -> bool:
    d1 = _orientation(q1, q2, p1)
    d2 = _orientation(q1, q2, p2)
    d3 = _orientation(p1, p2, q1)
    d4 = _orientation(p1, p2, q2)
    if d1 * d2 < 0 and d3 * d4 < 0:
        return True

    def on_segment(a: np.ndarray, b: np.ndarray, c: np.ndarray, orient: float) -> bool:
        return orient == 0 and min(a[0], b[0]) <= c[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= c[1] <= max(a[1], b[1])

    return (
        on_segment(q1, q2, p1, d1)
        or on_segment(q1, q2, p2, d2)
        or on_segment(p1, p2, q1, d3)
        or on_segment(p1, p2, q2, d4)
    )
