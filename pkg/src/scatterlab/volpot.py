"""Weighted volume potentials w_ψ(x) = ∫_D ψ(y) Φ(x, y) dy and their derivatives."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

import numpy as np
from scipy.spatial import cKDTree

from scatterlab.constants import (
    BOUNDARY_NODES_PER_DISTANCE,
    HESSIAN_MIN_BOUNDARY_NODES,
    HESSIAN_MIN_DISTANCE_CELLS,
    QUADRATURE_CHUNK_ENTRIES,
)
from scatterlab.geometry import MediumField, rasterize
from scatterlab.kernels import kernel_gradients, kernel_hessians, kernel_values, self_cell_integral
from scatterlab.shapes.base import as_points

if TYPE_CHECKING:
    from collections.abc import Callable, Iterator

    from numpy.typing import ArrayLike

    from scatterlab.geometry import Grid


class FormulaDomainError(ValueError):
    """Raised when a point lies too close to the boundary for the second-derivative formula."""


@dataclass(frozen=True, kw_only=True, eq=False)
class DensityField:
    """Density ψ on a medium's grid, zero outside the inside-D mask.

    `function` is the analytic expression of ψ. It serves as the Hölder extension ψ* in the
    second-derivative formula and lets the density be re-sampled on finer grids.
    """

    medium: MediumField
    values: np.ndarray
    holder_exponent: float = 1.0
    function: Callable[[np.ndarray], np.ndarray] | None = None
    constant_value: complex | None = None
    sup_norm: float = field(init=False)

    def __post_init__(self) -> None:
        values = np.array(self.values).reshape(self.medium.grid.counts)
        if not np.all(np.isfinite(values)):
            msg = "density values must be finite"
            raise ValueError(msg)
        if np.any(values[~self.medium.inside] != 0):
            msg = "density must vanish outside D"
            raise ValueError(msg)
        if not 0 < self.holder_exponent <= 1:
            msg = f"Hölder exponent must lie in (0, 1], got {self.holder_exponent}"
            raise ValueError(msg)
        values.flags.writeable = False
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "sup_norm", float(np.abs(values).max(initial=0.0)))

    @classmethod
    def from_function(
        cls,
        medium: MediumField,
        function: Callable[[np.ndarray], np.ndarray],
        *,
        holder_exponent: float = 1.0,
    ) -> DensityField:
        """Sample ψ at the cell centres inside D."""
        centers = medium.grid.cell_centers()
        values = np.zeros(len(centers), dtype=complex)
        inside = medium.inside.ravel()
        values[inside] = function(centers[inside])
        if np.all(values.imag == 0):
            values = values.real
        return cls(medium=medium, values=values, holder_exponent=holder_exponent, function=function)

    @classmethod
    def constant(cls, medium: MediumField, value: complex = 1.0) -> DensityField:
        values = np.where(medium.inside, value, 0.0 * value)
        return cls(medium=medium, values=values, constant_value=value)

    @property
    def grid(self) -> Grid:
        return self.medium.grid

    @property
    def is_constant(self) -> bool:
        return self.constant_value is not None

    def support(self) -> tuple[np.ndarray, np.ndarray]:
        """Cell centres inside D with their density values."""
        inside = self.medium.inside.ravel()
        return self.grid.cell_centers()[inside], self.values.ravel()[inside]

    def extension_at(self, points: ArrayLike) -> np.ndarray:
        """Evaluate ψ* at arbitrary points.

        Without an analytic expression the value of the nearest inside cell is used.
        """
        pts = as_points(points, self.grid.dimension)
        if self.constant_value is not None:
            return np.full(len(pts), self.constant_value, dtype=complex)
        if self.function is not None:
            return np.asarray(self.function(pts), dtype=complex)
        centers, values = self.support()
        if len(centers) == 0:
            return np.zeros(len(pts), dtype=complex)
        _, nearest = cKDTree(centers).query(pts)
        return np.asarray(values[nearest], dtype=complex)

    def on_grid(self, grid: Grid) -> DensityField:
        """Re-sample the density on another grid.

        Raises:
            ValueError: If the density has neither an analytic expression nor a constant value
        """
        medium = rasterize(self.medium.shape, self.medium.contrast, grid, min_index=self.medium.min_index)
        if self.constant_value is not None:
            return DensityField.constant(medium, self.constant_value)
        if self.function is None:
            msg = "only analytic or constant densities can be re-sampled on another grid"
            raise ValueError(msg)
        return DensityField.from_function(medium, self.function, holder_exponent=self.holder_exponent)


def _chunks(point_count: int, cell_count: int) -> Iterator[slice]:
    size = max(1, QUADRATURE_CHUNK_ENTRIES // max(cell_count, 1))
    for start in range(0, point_count, size):
        yield slice(start, min(start + size, point_count))


def _own_cell(d: np.ndarray, h: float) -> np.ndarray:
    """Mask of (point, cell) pairs where the point lies in the cell."""
    return np.all(np.abs(d) < h / 2, axis=-1)


def volume_potential(density: DensityField, points: ArrayLike, *, k: float | None = None) -> np.ndarray:
    """Evaluate w_ψ at points by midpoint quadrature with a self-cell correction.

    The cell containing x contributes ψ times the analytic integral of the kernel over the
    disk or ball of equal measure centred at x.

    Args:
        density: Density ψ
        points: Evaluation points, shape (N, m)
        k: Wavenumber for the Helmholtz kernel, or None for the Laplace kernel

    Returns:
        Complex potential values, shape (N,)
    """
    grid = density.grid
    dim, h = grid.dimension, grid.spacing
    pts = as_points(points, dim)
    centers, values = density.support()
    result = np.zeros(len(pts), dtype=complex)
    if len(centers) == 0:
        return result
    correction = self_cell_integral(h, dim, k)
    for block in _chunks(len(pts), len(centers)):
        d = pts[block, np.newaxis, :] - centers[np.newaxis, :, :]
        own = _own_cell(d, h)
        d = np.where(own[..., np.newaxis], h, d)
        kernel = np.where(own, 0.0, kernel_values(d, dim, k))
        result[block] = kernel @ values * grid.cell_volume + correction * (own.astype(float) @ values)
    return result


def volpot_gradient(density: DensityField, points: ArrayLike, *, k: float | None = None) -> np.ndarray:
    """Evaluate ∇w_ψ at points, shape (N, m).

    The own-cell term is dropped; it vanishes by symmetry at the cell centre.
    """
    grid = density.grid
    dim, h = grid.dimension, grid.spacing
    pts = as_points(points, dim)
    centers, values = density.support()
    result = np.zeros((len(pts), dim), dtype=complex)
    if len(centers) == 0:
        return result
    for block in _chunks(len(pts), len(centers) * dim):
        d = pts[block, np.newaxis, :] - centers[np.newaxis, :, :]
        own = _own_cell(d, h)
        d = np.where(own[..., np.newaxis], h, d)
        gradients = np.where(own[..., np.newaxis], 0.0, kernel_gradients(d, dim, k))
        result[block] = np.einsum("pcm,c->pm", gradients, values) * grid.cell_volume
    return result


def _boundary_node_count(density: DensityField, distance: float) -> int:
    """Boundary nodes for a point at this distance from ∂D, rounded up to a power of two."""
    shape = density.medium.shape
    wanted = BOUNDARY_NODES_PER_DISTANCE * shape.perimeter() / distance ** (shape.dimension - 1)
    count = max(HESSIAN_MIN_BOUNDARY_NODES, math.ceil(wanted))
    return 1 << (count - 1).bit_length()


def hessian_divergence_form(density: DensityField, points: ArrayLike) -> np.ndarray:
    """Second derivatives of w_ψ via the divergence-theorem form.

        ∂²w/∂xi∂xj (x) = ∫_D [ψ(y) - ψ*(x)] ∂²Φ(x, y) dy - ψ*(x) ∮ ∂Φ/∂xj(x, y) νi(y) ds(y)

    Valid on both sides of the boundary. Each point gets a boundary quadrature refined with its
    own distance to ∂D; points in the same power-of-two bucket share one sample. Results are
    symmetrised.
    """
    grid = density.grid
    dim, h = grid.dimension, grid.spacing
    pts = as_points(points, dim)
    shape = density.medium.shape
    node_counts = [_boundary_node_count(density, float(d)) for d in shape.distance_to_boundary(pts)]
    samples = {count: shape.boundary_sample(count) for count in sorted(set(node_counts))}
    psi_x = density.extension_at(pts)

    result = np.zeros((len(pts), dim, dim), dtype=complex)
    centers, values = density.support()
    for p, x in enumerate(pts):
        sample = samples[node_counts[p]]
        gradients = kernel_gradients(x - sample.points, dim)
        boundary = np.einsum("b,bi,bj->ij", sample.weights, sample.normals, gradients)
        result[p] = -psi_x[p] * boundary
        if not density.is_constant and len(centers):
            d = x - centers
            own = _own_cell(d, h)
            hessians = kernel_hessians(np.where(own[:, np.newaxis], h, d), dim)
            weights = np.where(own, 0.0, values - psi_x[p])
            result[p] += np.einsum("c,cij->ij", weights, hessians) * grid.cell_volume
    return (result + result.transpose(0, 2, 1)) / 2


def _direct_hessians(density: DensityField, points: np.ndarray) -> np.ndarray:
    grid = density.grid
    centers, values = density.support()
    result = np.zeros((len(points), grid.dimension, grid.dimension), dtype=complex)
    for p, x in enumerate(points):
        hessians = kernel_hessians(x - centers, grid.dimension)
        result[p] = np.einsum("c,cij->ij", values, hessians) * grid.cell_volume
    return (result + result.transpose(0, 2, 1)) / 2


def volpot_hessian_interior(density: DensityField, points: ArrayLike) -> np.ndarray:
    """Evaluate the Hessian of w_ψ at points away from the boundary.

    Interior points use the divergence-theorem form with the boundary integral over a boundary
    sample; exterior points use the directly twice-differentiated integral.

    Args:
        density: Density ψ, whose analytic expression is used as the extension ψ*
        points: Evaluation points at least two cells from the boundary

    Returns:
        Complex symmetric matrices, shape (N, m, m)

    Raises:
        FormulaDomainError: If a point is closer than two cells to the boundary
    """
    grid = density.grid
    pts = as_points(points, grid.dimension)
    shape = density.medium.shape
    distances = shape.distance_to_boundary(pts)
    limit = HESSIAN_MIN_DISTANCE_CELLS * grid.spacing
    if np.any(distances < limit):
        worst = int(np.argmin(distances))
        msg = (
            f"point {pts[worst].tolist()} is {distances[worst]:.3g} from the boundary; "
            f"the second-derivative formula needs at least {limit:.3g} ({HESSIAN_MIN_DISTANCE_CELLS} cells)"
        )
        raise FormulaDomainError(msg)
    inside = shape.contains(pts)
    result = np.zeros((len(pts), grid.dimension, grid.dimension), dtype=complex)
    if inside.any():
        result[inside] = hessian_divergence_form(density, pts[inside])
    if (~inside).any():
        result[~inside] = _direct_hessians(density, pts[~inside])
    return result
