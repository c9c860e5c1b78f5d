"""Lippmann–Schwinger solver for penetrable inhomogeneities.

The scattered field u of an incident wave v solves

    u(x) + ∫_D Φ_k(x, y) k²(1 - n(y)) u(y) dy = -∫_D Φ_k(x, y) k²(1 - n(y)) v(y) dy,

which is equivalent to Δu + k²qu = k²(1 - q)v with the outgoing radiation condition.
The volume integral is a discrete convolution on the cell-centred grid, applied with FFTs on a
zero-padded torus of at least twice the grid extent, so there is no wrap-around.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

import numpy as np
import scipy.fft
from scipy.sparse import linalg as spla

from scatterlab.constants import (
    DEFAULT_FARFIELD_DIRECTIONS,
    MIN_CELLS_PER_WAVELENGTH,
    MIN_FARFIELD_DIRECTIONS_2D,
    MIN_FARFIELD_DIRECTIONS_3D,
    SOLVER_MAX_ITERATIONS,
    SOLVER_RESTART,
    SOLVER_TOLERANCE,
)
from scatterlab.kernels import far_field_constant, kernel_values, self_cell_integral
from scatterlab.volpot import DensityField, volume_potential
from scatterlab.waves import PlaneWave, PointSource

if TYPE_CHECKING:
    from numpy.typing import ArrayLike

    from scatterlab.geometry import Grid, MediumField
    from scatterlab.waves import IncidentWave

__all__ = [
    "ConvergenceError",
    "ConvolutionOperator",
    "FarFieldPattern",
    "ResolutionError",
    "ScatterSolution",
    "SourceSolution",
    "born_approximation",
    "far_field",
    "far_field_constant",
    "far_field_directions",
    "far_field_values",
    "nonscattering_residual",
    "optical_theorem_ratio",
    "scattered_field_at",
    "scattering_strength",
    "solve_scattering",
    "solve_source_problem",
]


class ResolutionError(ValueError):
    """Raised when the grid does not resolve the wavelength inside the medium."""


class ConvergenceError(RuntimeError):
    """Raised when the Krylov iteration does not reach the tolerance."""

    def __init__(self, msg: str, history: list[float]) -> None:
        super().__init__(msg)
        self.history = history


class ConvolutionOperator:
    """Apply f ↦ ∫ Φ_k(·, y) f(y) dy on a grid by zero-padded FFT convolution.

    The kernel is sampled at cell offsets up to the grid extent and truncated beyond, and the
    zero-offset entry is the equal-measure self-cell integral.
    """

    def __init__(self, grid: Grid, k: float, *, workers: int | None = -1) -> None:
        if not k > 0:
            msg = f"wavenumber must be positive, got {k}"
            raise ValueError(msg)
        self.grid = grid
        self.k = k
        self.workers = workers
        self.padded = tuple(scipy.fft.next_fast_len(2 * n) for n in grid.counts)
        offsets = []
        for n, p in zip(grid.counts, self.padded, strict=True):
            index = np.arange(p)
            offset = np.where(index < p // 2, index, index - p).astype(float)
            offset[np.abs(offset) > n - 1] = np.nan
            offsets.append(offset * grid.spacing)
        displacement = np.stack(np.meshgrid(*offsets, indexing="ij"), axis=-1)
        truncated = np.isnan(displacement).any(axis=-1)
        displacement = np.nan_to_num(displacement, nan=grid.spacing)
        origin = np.all(displacement == 0, axis=-1)
        displacement[origin] = grid.spacing
        kernel = kernel_values(displacement, grid.dimension, k) * grid.cell_volume
        kernel[origin] = self_cell_integral(grid.spacing, grid.dimension, k)
        kernel[truncated] = 0
        self.kernel_hat = scipy.fft.fftn(kernel, workers=workers)

    def apply(self, values: np.ndarray) -> np.ndarray:
        """Convolve grid values of shape `grid.counts` with the kernel."""
        transformed = scipy.fft.fftn(values, s=self.padded, workers=self.workers)
        result = scipy.fft.ifftn(transformed * self.kernel_hat, workers=self.workers)
        return result[tuple(slice(0, n) for n in self.grid.counts)]


@dataclass(frozen=True, kw_only=True, eq=False)
class ScatterSolution:
    medium: MediumField
    incident: IncidentWave
    k: float
    scattered: np.ndarray
    incident_field: np.ndarray
    iterations: int
    relative_residual: float
    residual_history: tuple[float, ...] = ()

    @property
    def total(self) -> np.ndarray:
        return self.scattered + self.incident_field

    @property
    def source_density(self) -> np.ndarray:
        """k²(1 - q)(u + v), the density whose negated potential is u."""
        return self.k**2 * self.medium.deviation * self.total


@dataclass(frozen=True, kw_only=True, eq=False)
class FarFieldPattern:
    k: float
    directions: np.ndarray
    values: np.ndarray
    weights: np.ndarray
    dimension: int
    l2_norm: float = field(init=False)

    def __post_init__(self) -> None:
        minimum = MIN_FARFIELD_DIRECTIONS_2D if self.dimension == 2 else MIN_FARFIELD_DIRECTIONS_3D  # noqa: PLR2004
        if len(self.directions) < minimum:
            msg = f"far-field pattern needs at least {minimum} directions in {self.dimension}D"
            raise ValueError(msg)
        object.__setattr__(self, "l2_norm", float(np.sqrt(np.sum(self.weights * np.abs(self.values) ** 2))))

    @property
    def angles(self) -> np.ndarray:
        """Polar angle per direction (2D), or (θ, φ) pairs (3D)."""
        if self.dimension == 2:  # noqa: PLR2004
            return np.arctan2(self.directions[:, 1], self.directions[:, 0])
        polar = np.arccos(np.clip(self.directions[:, 2], -1, 1))
        azimuth = np.arctan2(self.directions[:, 1], self.directions[:, 0])
        return np.column_stack([polar, azimuth])


@dataclass(frozen=True, kw_only=True, eq=False)
class SourceSolution:
    density: DensityField
    k: float
    field: np.ndarray
    pattern: FarFieldPattern


def check_resolution(medium: MediumField, k: float) -> None:
    """Raise ResolutionError unless the wavelength inside max √n spans at least 10 cells."""
    wavelength = 2 * math.pi / (k * math.sqrt(medium.max_index))
    cells = wavelength / medium.grid.spacing
    if cells < MIN_CELLS_PER_WAVELENGTH:
        msg = (
            f"h={medium.grid.spacing} gives {cells:.1f} cells per wavelength at k={k}; "
            f"at least {MIN_CELLS_PER_WAVELENGTH} are required"
        )
        raise ResolutionError(msg)


def incident_on_grid(medium: MediumField, incident: IncidentWave) -> np.ndarray:
    """Sample the incident field at all cell centres.

    Raises:
        WaveError: If a point source lies inside the closure of D
        ValueError: If a point source coincides with a cell centre or dimensions differ
    """
    grid = medium.grid
    if incident.dimension != grid.dimension:
        msg = f"{incident.dimension}D incident wave on a {grid.dimension}D grid"
        raise ValueError(msg)
    centers = grid.cell_centers()
    if isinstance(incident, PointSource):
        incident.check_outside(medium.shape)
        if np.any(np.all(np.isclose(centers, incident.source, rtol=0, atol=1e-12 * grid.spacing), axis=1)):
            msg = f"point source {list(incident.source)} coincides with a grid node"
            raise ValueError(msg)
    return incident.evaluate(centers).reshape(grid.counts)


def solve_scattering(
    medium: MediumField,
    incident: IncidentWave,
    k: float | None = None,
    *,
    tol: float = SOLVER_TOLERANCE,
    max_iterations: int = SOLVER_MAX_ITERATIONS,
    restart: int = SOLVER_RESTART,
    operator: ConvolutionOperator | None = None,
) -> ScatterSolution:
    """Solve the Lippmann–Schwinger equation for the scattered field.

    Args:
        medium: Rasterized medium
        incident: Incident wave
        k: Wavenumber, defaulting to the incident wave's
        tol: Relative residual tolerance of the integral equation
        max_iterations: Total GMRES iteration budget
        restart: GMRES restart length
        operator: Precomputed convolution operator for this grid and k

    Returns:
        ScatterSolution with solver diagnostics

    Raises:
        ResolutionError: If the grid under-resolves the wavelength
        ConvergenceError: If GMRES does not converge, carrying the residual history
    """
    k = incident.k if k is None else k
    if incident.k != k:
        incident = incident.with_wavenumber(k)
    check_resolution(medium, k)
    v = incident_on_grid(medium, incident)
    if medium.is_trivial:
        return ScatterSolution(
            medium=medium,
            incident=incident,
            k=k,
            scattered=np.zeros_like(v),
            incident_field=v,
            iterations=0,
            relative_residual=0.0,
        )

    operator = operator or ConvolutionOperator(medium.grid, k)
    contrast = k**2 * medium.deviation
    counts = medium.grid.counts
    size = medium.grid.cell_count

    def matvec(x: np.ndarray) -> np.ndarray:
        u = x.reshape(counts)
        return (u + operator.apply(contrast * u)).ravel()

    system = spla.LinearOperator((size, size), matvec=matvec, dtype=complex)
    rhs = -operator.apply(contrast * v).ravel()
    history: list[float] = []
    solution, info = spla.gmres(
        system,
        rhs,
        rtol=tol,
        atol=0.0,
        restart=restart,
        maxiter=math.ceil(max_iterations / restart),
        callback=history.append,
        callback_type="pr_norm",
    )
    residual = float(np.linalg.norm(rhs - system.matvec(solution)) / np.linalg.norm(rhs))
    if info != 0:
        msg = f"GMRES stopped after {len(history)} iterations at relative residual {residual:.3e} (tol {tol:g})"
        raise ConvergenceError(msg, history)
    return ScatterSolution(
        medium=medium,
        incident=incident,
        k=k,
        scattered=solution.reshape(counts),
        incident_field=v,
        iterations=len(history),
        relative_residual=residual,
        residual_history=tuple(history),
    )


def born_approximation(
    medium: MediumField,
    incident: IncidentWave,
    k: float | None = None,
    *,
    operator: ConvolutionOperator | None = None,
) -> np.ndarray:
    """First-order scattered field: one application of the integral operator to v."""
    k = incident.k if k is None else k
    if incident.k != k:
        incident = incident.with_wavenumber(k)
    v = incident_on_grid(medium, incident)
    operator = operator or ConvolutionOperator(medium.grid, k)
    return -operator.apply(k**2 * medium.deviation * v)


def far_field_directions(count: int, dimension: int) -> tuple[np.ndarray, np.ndarray]:
    """Uniform circle directions (2D) or a Fibonacci sphere set (3D) with equal quadrature weights."""
    index = np.arange(count)
    if dimension == 2:  # noqa: PLR2004
        theta = 2 * np.pi * index / count
        return np.column_stack([np.cos(theta), np.sin(theta)]), np.full(count, 2 * np.pi / count)
    z = 1 - 2 * (index + 0.5) / count
    ring = np.sqrt(1 - z**2)
    phi = index * math.pi * (3 - math.sqrt(5))
    directions = np.column_stack([ring * np.cos(phi), ring * np.sin(phi), z])
    return directions, np.full(count, 4 * np.pi / count)


def _far_field_of_density(grid: Grid, density: np.ndarray, k: float, directions: np.ndarray) -> np.ndarray:
    """Far field of u = -∫ Φ_k(·, y) ρ(y) dy, i.e. -c_m ∫ e^{-ik x̂·y} ρ(y) dy."""
    support = np.flatnonzero(density.ravel())
    values = density.ravel()[support]
    points = grid.cell_centers()[support]
    phases = np.exp(-1j * k * (directions @ points.T))
    return -far_field_constant(k, grid.dimension) * (phases @ values) * grid.cell_volume


def far_field_values(solution: ScatterSolution, directions: ArrayLike) -> np.ndarray:
    """u^∞ at arbitrary unit directions."""
    dirs = np.atleast_2d(np.asarray(directions, dtype=float))
    return _far_field_of_density(solution.medium.grid, solution.source_density, solution.k, dirs)


def far_field(solution: ScatterSolution, count: int = DEFAULT_FARFIELD_DIRECTIONS) -> FarFieldPattern:
    """Far-field pattern u^∞(x̂) = -c_m k² ∫_D e^{-ik x̂·y} (1 - n(y)) (v + u)(y) dy."""
    dimension = solution.medium.dimension
    directions, weights = far_field_directions(count, dimension)
    return FarFieldPattern(
        k=solution.k,
        directions=directions,
        values=far_field_values(solution, directions),
        weights=weights,
        dimension=dimension,
    )


def scattering_strength(solution: ScatterSolution, pattern: FarFieldPattern) -> float:
    """ρ(k; v) = ‖u^∞‖₂ / ‖v‖_{L²(D)}, zero for a trivial medium."""
    medium = solution.medium
    weights = medium.inside if medium.fill is None else medium.fill
    v_norm = math.sqrt(float(np.sum(weights * np.abs(solution.incident_field) ** 2)) * medium.grid.cell_volume)
    if v_norm == 0 or medium.is_trivial:
        return 0.0
    return pattern.l2_norm / v_norm


def nonscattering_residual(
    medium: MediumField,
    k: float,
    incident: IncidentWave,
    *,
    tol: float = SOLVER_TOLERANCE,
    max_iterations: int = SOLVER_MAX_ITERATIONS,
    restart: int = SOLVER_RESTART,
    operator: ConvolutionOperator | None = None,
) -> float:
    """Normalized scattering strength ρ(k; v); values near zero flag a non-scattering candidate."""
    if medium.is_trivial:
        return 0.0
    solution = solve_scattering(
        medium, incident, k, tol=tol, max_iterations=max_iterations, restart=restart, operator=operator
    )
    return scattering_strength(solution, far_field(solution))


def scattered_field_at(solution: ScatterSolution, points: ArrayLike) -> np.ndarray:
    """Evaluate u at arbitrary points through the representation integral -∫ Φ_k ρ dy."""
    density = DensityField(medium=solution.medium, values=solution.source_density)
    return -volume_potential(density, points, k=solution.k)


def optical_theorem_ratio(solution: ScatterSolution, count: int = DEFAULT_FARFIELD_DIRECTIONS) -> float:
    """Ratio of ‖u^∞‖² to its forward-amplitude prediction for plane-wave incidence.

    2D: ‖u^∞‖² = -2 √(2π/k) Re(e^{iπ/4} u^∞(d)); 3D: ‖u^∞‖² = (4π/k) Im u^∞(d).
    The ratio is 1 for real n when the discretisation conserves energy.
    """
    if not isinstance(solution.incident, PlaneWave):
        msg = "the optical theorem applies to plane-wave incidence"
        raise TypeError(msg)
    k = solution.k
    pattern = far_field(solution, count)
    forward = far_field_values(solution, np.array(solution.incident.direction))[0]
    if pattern.dimension == 2:  # noqa: PLR2004
        predicted = -2 * math.sqrt(2 * math.pi / k) * (np.exp(1j * math.pi / 4) * forward).real
    else:
        predicted = 4 * math.pi / k * forward.imag
    if predicted == 0:
        return math.nan
    return float(pattern.l2_norm**2 / predicted)


def solve_source_problem(
    density: DensityField,
    k: float,
    *,
    count: int = DEFAULT_FARFIELD_DIRECTIONS,
    operator: ConvolutionOperator | None = None,
) -> SourceSolution:
    """Radiating solution of Δu + k²u = f by one convolution u = -Φ_k * f, with its far field."""
    grid = density.grid
    operator = operator or ConvolutionOperator(grid, k)
    values = np.asarray(density.values, dtype=complex)
    directions, weights = far_field_directions(count, grid.dimension)
    pattern = FarFieldPattern(
        k=k,
        directions=directions,
        values=_far_field_of_density(grid, values, k, directions),
        weights=weights,
        dimension=grid.dimension,
    )
    return SourceSolution(density=density, k=k, field=-operator.apply(values), pattern=pattern)
