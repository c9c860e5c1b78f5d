"""Grids, contrast profiles and rasterized media."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Any

import numpy as np
from numpy.polynomial import polynomial

from scatterlab.constants import GRID_MARGIN_CELLS, MAX_GRID_CELLS, MIN_REFRACTIVE_INDEX
from scatterlab.shapes import BoundarySample, Shape, ShapeError
from scatterlab.shapes.base import as_points

if TYPE_CHECKING:
    from numpy.typing import ArrayLike

__all__ = [
    "BoundarySample",
    "Contrast",
    "Grid",
    "GridError",
    "MediumField",
    "boundary_sample",
    "contains",
    "rasterize",
]


class GridError(ValueError):
    """Raised when a grid is invalid, too large, or does not contain a shape with margin."""


@dataclass(frozen=True, kw_only=True)
class Grid:
    """Isotropic cell-centred grid.

    `origin` is the centre of cell (0, ..., 0); cell centres are origin + h * index.
    """

    origin: tuple[float, ...]
    spacing: float
    counts: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "origin", tuple(float(v) for v in self.origin))
        object.__setattr__(self, "counts", tuple(int(v) for v in self.counts))
        if len(self.counts) not in (2, 3):
            msg = f"grid dimension must be 2 or 3, got {len(self.counts)}"
            raise GridError(msg)
        if len(self.origin) != len(self.counts):
            msg = "grid origin and counts differ in dimension"
            raise GridError(msg)
        if not self.spacing > 0:
            msg = f"grid spacing must be positive, got {self.spacing}"
            raise GridError(msg)
        if min(self.counts) < 1:
            msg = f"grid counts must be positive, got {self.counts}"
            raise GridError(msg)

    @classmethod
    def around(
        cls,
        shape: Shape,
        spacing: float,
        *,
        max_cells: int = MAX_GRID_CELLS,
        margin_cells: int = GRID_MARGIN_CELLS,
    ) -> Grid:
        """Build the smallest centred grid containing the shape's bounding box with the required margin.

        Raises:
            GridError: If the grid would exceed max_cells
        """
        if not spacing > 0:
            msg = f"grid spacing must be positive, got {spacing}"
            raise GridError(msg)
        low, high = shape.bounding_box()
        counts = tuple(int(math.ceil(extent / spacing)) + 2 * margin_cells + 1 for extent in high - low)
        total = math.prod(counts)
        if total > max_cells:
            msg = f"grid with h={spacing} needs {total} cells, above the limit of {max_cells}"
            raise GridError(msg)
        middle = (low + high) / 2
        origin = tuple(middle - spacing * (np.array(counts) - 1) / 2)
        return cls(origin=origin, spacing=spacing, counts=counts)

    @property
    def dimension(self) -> int:
        return len(self.counts)

    @property
    def cell_count(self) -> int:
        return math.prod(self.counts)

    @property
    def cell_volume(self) -> float:
        return float(self.spacing**self.dimension)

    def axes(self) -> list[np.ndarray]:
        return [o + self.spacing * np.arange(n) for o, n in zip(self.origin, self.counts, strict=True)]

    def mesh(self) -> list[np.ndarray]:
        return np.meshgrid(*self.axes(), indexing="ij")

    def cell_centers(self) -> np.ndarray:
        """All cell centres as an (N, m) array in C order."""
        return np.stack([axis.ravel() for axis in self.mesh()], axis=1)

    def bounds(self) -> tuple[np.ndarray, np.ndarray]:
        """Lower and upper corners of the box covered by the cells."""
        origin = np.array(self.origin)
        half = self.spacing / 2
        return origin - half, origin + self.spacing * (np.array(self.counts) - 1) + half

    def inside_box(self, points: ArrayLike) -> np.ndarray:
        pts = as_points(points, self.dimension)
        low, high = self.bounds()
        return np.all((pts >= low) & (pts <= high), axis=1)

    def diameter(self) -> float:
        low, high = self.bounds()
        return float(np.linalg.norm(high - low))

    def check_contains(self, shape: Shape, margin_cells: int = GRID_MARGIN_CELLS) -> None:
        """Raise GridError unless the box contains the shape's bounding box with the margin."""
        if shape.dimension != self.dimension:
            msg = f"{shape.dimension}D shape on a {self.dimension}D grid"
            raise GridError(msg)
        low, high = self.bounds()
        shape_low, shape_high = shape.bounding_box()
        margin = margin_cells * self.spacing
        if np.any(shape_low - low < margin) or np.any(high - shape_high < margin):
            msg = f"grid box does not contain the {shape.type} with a margin of {margin_cells} cells"
            raise GridError(msg)

    def with_spacing(self, spacing: float, shape: Shape, *, max_cells: int = MAX_GRID_CELLS) -> Grid:
        """Grid of another spacing covering at least the same box."""
        low, high = self.bounds()
        extent = high - low
        counts = tuple(int(math.ceil(e / spacing)) for e in extent)
        total = math.prod(counts)
        if total > max_cells:
            msg = f"grid with h={spacing} needs {total} cells, above the limit of {max_cells}"
            raise GridError(msg)
        middle = (low + high) / 2
        origin = tuple(middle - spacing * (np.array(counts) - 1) / 2)
        grid = Grid(origin=origin, spacing=spacing, counts=counts)
        grid.check_contains(shape)
        return grid


@dataclass(frozen=True, kw_only=True)
class Contrast:
    """Refractive index inside D as a polynomial in the distance r from the shape's reference point.

    A single coefficient is a constant index.
    """

    coefficients: tuple[float, ...] = (1.0,)

    def __post_init__(self) -> None:
        coefficients = tuple(float(c) for c in self.coefficients)
        if not coefficients or not all(math.isfinite(c) for c in coefficients):
            msg = "contrast needs at least one finite coefficient"
            raise ValueError(msg)
        object.__setattr__(self, "coefficients", coefficients)

    @classmethod
    def constant(cls, index: float) -> Contrast:
        return cls(coefficients=(index,))

    @classmethod
    def from_data(cls, data: dict[str, Any]) -> Contrast:
        """Parse {"type": "constant", "n": ...} or {"type": "radial", "coefficients": [...]}."""
        kind = data.get("type")
        if kind == "constant":
            return cls.constant(float(data["n"]))
        if kind == "radial":
            return cls(coefficients=tuple(data["coefficients"]))
        msg = f"unknown contrast type {kind!r}, expected 'constant' or 'radial'"
        raise ValueError(msg)

    def to_data(self) -> dict[str, Any]:
        if self.is_constant:
            return {"type": "constant", "n": self.coefficients[0]}
        return {"type": "radial", "coefficients": list(self.coefficients)}

    @property
    def is_constant(self) -> bool:
        return len(self.coefficients) == 1

    @property
    def is_trivial(self) -> bool:
        return self.is_constant and self.coefficients[0] == 1.0

    def evaluate(self, radius: ArrayLike) -> np.ndarray:
        return np.asarray(polynomial.polyval(np.asarray(radius, dtype=float), self.coefficients), dtype=float)

    def index_at(self, shape: Shape, points: ArrayLike) -> np.ndarray:
        pts = as_points(points, shape.dimension)
        return self.evaluate(np.linalg.norm(pts - shape.reference_point(), axis=1))


@dataclass(frozen=True, kw_only=True, eq=False)
class MediumField:
    """Rasterized index q over a grid: n at cell centres inside D, 1 elsewhere.

    `fill` is the fraction of each cell inside D when cut cells were averaged, else None.
    """

    grid: Grid
    shape: Shape
    contrast: Contrast
    q: np.ndarray
    inside: np.ndarray
    fill: np.ndarray | None = None
    min_index: float = MIN_REFRACTIVE_INDEX
    estimated_measure: float = field(init=False)

    def __post_init__(self) -> None:
        q = np.array(self.q, dtype=float).reshape(self.grid.counts)
        inside = np.array(self.inside, dtype=bool).reshape(self.grid.counts)
        q.flags.writeable = False
        inside.flags.writeable = False
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "inside", inside)
        if self.fill is not None:
            fill = np.array(self.fill, dtype=float).reshape(self.grid.counts)
            fill.flags.writeable = False
            object.__setattr__(self, "fill", fill)
        cells = float(inside.sum()) if self.fill is None else float(self.fill.sum())
        object.__setattr__(self, "estimated_measure", self.grid.cell_volume * cells)

    @property
    def dimension(self) -> int:
        return self.grid.dimension

    @property
    def deviation(self) -> np.ndarray:
        """1 - q, which vanishes outside D."""
        return 1.0 - self.q

    @property
    def max_index(self) -> float:
        return float(self.q.max())

    @property
    def is_trivial(self) -> bool:
        return bool(np.all(self.q == 1.0))


def contains(shape: Shape, x: ArrayLike) -> np.ndarray:
    """Boolean mask of points in the open set D."""
    return shape.contains(x)


def boundary_sample(shape: Shape, count: int) -> BoundarySample:
    """Boundary points with outward normals, corner flags and quadrature weights."""
    return shape.boundary_sample(count)


def rasterize(
    shape: Shape,
    contrast: Contrast,
    grid: Grid,
    *,
    min_index: float = MIN_REFRACTIVE_INDEX,
    subsamples: int = 1,
) -> MediumField:
    """Sample the refractive index at cell centres.

    With subsamples > 1, cells cut by ∂D instead carry the mean of q over a
    subsamples^m lattice inside the cell, and count as inside when any sub-point is.

    Args:
        shape: The inhomogeneity D
        contrast: Index profile inside D
        grid: Grid containing the shape with margin
        min_index: Lower bound n0 on the index inside D
        subsamples: Sub-points per axis in cells cut by the boundary; 1 samples centres only

    Returns:
        The medium field, with the measure of D estimated from the inside cells

    Raises:
        GridError: If the grid does not contain the shape with margin
        ValueError: If the index drops below min_index inside D, or subsamples < 1
    """
    if shape.dimension != grid.dimension:
        msg = f"{shape.dimension}D shape on a {grid.dimension}D grid"
        raise ShapeError(msg)
    if subsamples < 1:
        msg = f"subsamples must be at least 1, got {subsamples}"
        raise ValueError(msg)
    grid.check_contains(shape)
    centers = grid.cell_centers()
    inside = shape.contains(centers)
    q = np.ones(len(centers))
    if inside.any():
        q[inside] = _index_inside(shape, contrast, centers[inside], min_index)
    fill: np.ndarray | None = None
    if subsamples > 1:
        fill = inside.astype(float)
        cut = np.flatnonzero(shape.distance_to_boundary(centers) < grid.spacing * math.sqrt(grid.dimension) / 2)
        q[cut], fill[cut] = _average_cells(shape, contrast, grid, centers[cut], subsamples, min_index)
        inside = fill > 0
    return MediumField(grid=grid, shape=shape, contrast=contrast, q=q, inside=inside, fill=fill, min_index=min_index)


def _index_inside(shape: Shape, contrast: Contrast, points: np.ndarray, min_index: float) -> np.ndarray:
    index = contrast.index_at(shape, points)
    if index.min() < min_index:
        msg = f"refractive index {index.min():.3g} inside D is below the minimum {min_index}"
        raise ValueError(msg)
    return index


def _average_cells(
    shape: Shape, contrast: Contrast, grid: Grid, centers: np.ndarray, subsamples: int, min_index: float
) -> tuple[np.ndarray, np.ndarray]:
    """Mean q and inside fraction over a sub-lattice of each cell."""
    ticks = ((np.arange(subsamples) + 0.5) / subsamples - 0.5) * grid.spacing
    offsets = np.stack(np.meshgrid(*[ticks] * grid.dimension, indexing="ij"), axis=-1).reshape(-1, grid.dimension)
    points = (centers[:, np.newaxis, :] + offsets[np.newaxis, :, :]).reshape(-1, grid.dimension)
    inside = shape.contains(points)
    q = np.ones(len(points))
    if inside.any():
        q[inside] = _index_inside(shape, contrast, points[inside], min_index)
    per_cell = (len(centers), len(offsets))
    return q.reshape(per_cell).mean(axis=1), inside.reshape(per_cell).mean(axis=1)
