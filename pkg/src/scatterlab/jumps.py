"""Symmetric jumps of second derivatives of w_ψ across the boundary, and the integral bounds behind them."""

from __future__ import annotations

import math
from typing import TYPE_CHECKING, Any, NamedTuple

import numpy as np
from scipy import integrate

from scatterlab.constants import (
    ETA_TO_SPACING_RATIO,
    JUMP_DIVERGENCE_FACTOR,
    JUMP_GROWTH_FACTOR,
    MAX_GRID_CELLS,
)
from scatterlab.geometry import GridError
from scatterlab.volpot import DensityField, hessian_divergence_form

if TYPE_CHECKING:
    from collections.abc import Callable, Sequence

    from numpy.typing import ArrayLike

# x0 counts as a boundary point within this fraction of the shape diameter
_ON_BOUNDARY_TOLERANCE = 1e-9
_LIPSCHITZ_SLACK = 1e-9


class ProbeError(ValueError):
    """Raised when a jump probe is set up outside the region where it is defined."""


class JumpProbeReport(NamedTuple):
    point: np.ndarray
    direction: np.ndarray
    etas: np.ndarray
    jumps: np.ndarray
    sup_per_entry: np.ndarray
    sup_jump: float
    divergent: bool
    truncated_etas: tuple[float, ...]
    spacings: np.ndarray

    def entry(self, i: int, j: int) -> np.ndarray:
        """Jump values of one Hessian entry over the probe offsets."""
        return self.jumps[:, i, j]

    def to_data(self) -> dict[str, Any]:
        return {
            "point": self.point.tolist(),
            "direction": self.direction.tolist(),
            "etas": self.etas.tolist(),
            "spacings": self.spacings.tolist(),
            "jumps_real": self.jumps.real.tolist(),
            "jumps_imag": self.jumps.imag.tolist(),
            "sup_per_entry": self.sup_per_entry.tolist(),
            "sup_jump": self.sup_jump,
            "divergent": self.divergent,
            "truncated_etas": list(self.truncated_etas),
        }


class InequalityCheck(NamedTuple):
    lhs: Any
    rhs: Any
    gap: Any


class JumpIntegralReport(NamedTuple):
    """Values of the tangential (ji) and normal (jm) jump integrals per offset η.

    `ratios` compares the larger of the two with the comparison integral ∫(|u|² + 1)^(-m/2) du
    over the scaled ball of radius ρ/η.
    """

    etas: np.ndarray
    tangential: np.ndarray
    normal: np.ndarray
    comparison: np.ndarray
    ratios: np.ndarray
    sup_tangential: float
    sup_normal: float
    growing: bool


def _probe_offsets(etas: Sequence[float]) -> np.ndarray:
    offsets = np.sort(np.asarray(etas, dtype=float))[::-1]
    if len(offsets) == 0:
        msg = "jump probe needs at least one offset"
        raise ProbeError(msg)
    if offsets[-1] <= 0:
        msg = "probe offsets must be positive"
        raise ProbeError(msg)
    if np.any(np.diff(offsets) == 0):
        msg = "probe offsets must be distinct"
        raise ProbeError(msg)
    return offsets


def symmetric_jump_probe(
    density: DensityField,
    point: ArrayLike,
    direction: ArrayLike,
    etas: Sequence[float],
    *,
    max_cells: int = MAX_GRID_CELLS,
    progress_callback: Callable[[int], None] | None = None,
) -> JumpProbeReport:
    """Measure Δij(η) = ∂²w/∂xi∂xj(x0 + ηe) - ∂²w/∂xi∂xj(x0 - ηe) over decreasing η.

    Both sides use the divergence-theorem form of the second derivatives. For non-constant
    densities the grid is refined so that η >= 4h; offsets whose grid would exceed max_cells
    are skipped and listed in `truncated_etas`.

    Args:
        density: Density ψ, with an analytic expression when refinement is needed
        point: Boundary point x0
        direction: Probe direction e, normalised here
        etas: Probe offsets
        max_cells: Cell budget for refined grids
        progress_callback: Called with 1 after each offset

    Returns:
        JumpProbeReport with symmetric jump matrices and the divergence flag

    Raises:
        ProbeError: If x0 is not on the boundary, e is zero, or the probe line leaves the grid
    """
    grid = density.grid
    shape = density.medium.shape
    x0 = np.asarray(point, dtype=float)
    e = np.asarray(direction, dtype=float)
    if x0.shape != (grid.dimension,) or e.shape != (grid.dimension,):
        msg = f"probe point and direction must be {grid.dimension}D vectors"
        raise ProbeError(msg)
    if np.linalg.norm(e) == 0:
        msg = "probe direction must be nonzero"
        raise ProbeError(msg)
    e = e / np.linalg.norm(e)
    offsets = _probe_offsets(etas)
    if shape.distance_to_boundary(x0)[0] > _ON_BOUNDARY_TOLERANCE * shape.diameter:
        msg = f"probe point {x0.tolist()} is not on the boundary"
        raise ProbeError(msg)
    ends = np.array([x0 + offsets[0] * e, x0 - offsets[0] * e])
    if not grid.inside_box(ends).all():
        msg = f"probe line of half-length {offsets[0]} exits the grid"
        raise ProbeError(msg)

    refined: dict[float, DensityField] = {grid.spacing: density}
    kept, jumps, spacings, truncated = [], [], [], []
    for eta in offsets:
        spacing = grid.spacing
        if not density.is_constant and eta < ETA_TO_SPACING_RATIO * grid.spacing:
            spacing = eta / ETA_TO_SPACING_RATIO
        if spacing not in refined:
            try:
                refined[spacing] = density.on_grid(grid.with_spacing(spacing, shape, max_cells=max_cells))
            except GridError:
                truncated.append(float(eta))
                continue
        hessians = hessian_divergence_form(refined[spacing], np.array([x0 + eta * e, x0 - eta * e]))
        kept.append(eta)
        jumps.append(hessians[0] - hessians[1])
        spacings.append(spacing)
        if progress_callback:
            progress_callback(1)

    if not kept:
        msg = "every probe offset exceeded the cell budget"
        raise ProbeError(msg)
    jump_array = np.array(jumps)
    magnitudes = np.abs(jump_array)
    sup_jump = float(magnitudes.max())
    reference = float(magnitudes[0].max())
    return JumpProbeReport(
        point=x0,
        direction=e,
        etas=np.array(kept),
        jumps=jump_array,
        sup_per_entry=magnitudes.max(axis=0),
        sup_jump=sup_jump,
        divergent=sup_jump > JUMP_DIVERGENCE_FACTOR * reference,
        truncated_etas=tuple(truncated),
        spacings=np.array(spacings),
    )


def appendix_inequality_check(a: ArrayLike, b: ArrayLike) -> InequalityCheck:
    """Evaluate [1 + a²b²/(1+a²)]² - [2ab/(1+a²)]² against 4/(b² + 4).

    The gap lhs - rhs is non-negative, with equality at a = ±1/√(b² + 3).
    Scalars give floats, arrays give arrays.
    """
    a_arr = np.asarray(a, dtype=float)
    b_arr = np.asarray(b, dtype=float)
    scale = 1 + a_arr**2
    lhs = (1 + a_arr**2 * b_arr**2 / scale) ** 2 - (2 * a_arr * b_arr / scale) ** 2
    rhs = 4 / (b_arr**2 + 4)
    if lhs.ndim == 0:
        return InequalityCheck(lhs=float(lhs), rhs=float(rhs), gap=float(lhs - rhs))
    return InequalityCheck(lhs=lhs, rhs=rhs, gap=lhs - rhs)


def jump_integrands(y: ArrayLike, f: ArrayLike, eta: float, dim: int = 2) -> tuple[np.ndarray, np.ndarray]:
    """Pointwise integrands of the tangential and normal jump integrals.

    Args:
        y: Tangential coordinates, shape (N,) in 2D or (N, 2) in 3D
        f: Graph values f(y), shape (N,)
        eta: Offset along the normal
        dim: Space dimension m

    Returns:
        Tangential integrands |y_j/R₋^m - y_j/R₊^m| with shape (N, m-1) and normal integrands
        |(f-η)/R₋^m - (f+η)/R₊^m| with shape (N,), where R± = (|y|² + (f±η)²)^(1/2)
    """
    coords = np.asarray(y, dtype=float).reshape(-1, dim - 1)
    values = np.asarray(f, dtype=float).ravel()
    radius2 = (coords**2).sum(axis=1)
    below = (radius2 + (values - eta) ** 2) ** (dim / 2)
    above = (radius2 + (values + eta) ** 2) ** (dim / 2)
    tangential = np.abs(coords / below[:, np.newaxis] - coords / above[:, np.newaxis])
    normal = np.abs((values - eta) / below - (values + eta) / above)
    return tangential, normal


def comparison_integral(rho: float, eta: float, dim: int) -> float:
    """∫ (|u|² + 1)^(-m/2) du over the (m-1)-ball of radius ρ/η."""
    scaled = rho / eta
    if dim == 2:  # noqa: PLR2004
        return 2 * math.atan(scaled)
    return 2 * math.pi * (1 - 1 / math.sqrt(1 + scaled**2))


def _check_graph(nodes: np.ndarray, values: np.ndarray, lipschitz: float) -> None:
    if nodes.shape != values.shape or nodes.ndim != 1 or len(nodes) < 2:  # noqa: PLR2004
        msg = "graph samples need matching 1D node and value arrays with at least two entries"
        raise ValueError(msg)
    if np.any(np.diff(nodes) <= 0):
        msg = "graph nodes must be strictly increasing"
        raise ValueError(msg)
    if not nodes[0] <= 0 <= nodes[-1] or abs(float(np.interp(0.0, nodes, values))) > _LIPSCHITZ_SLACK:
        msg = "graph function must satisfy f(0) = 0"
        raise ValueError(msg)
    slopes = np.abs(np.diff(values) / np.diff(nodes))
    if slopes.max() > lipschitz * (1 + _LIPSCHITZ_SLACK):
        msg = f"graph slope {slopes.max():.6g} exceeds the declared Lipschitz constant {lipschitz}"
        raise ValueError(msg)


def _integrate(integrand: Callable[[float], float], low: float, high: float, breaks: np.ndarray) -> float:
    edges = np.unique(np.concatenate([[low, high], breaks[(breaks > low) & (breaks < high)]]))
    return sum(integrate.quad(integrand, a, b, limit=200)[0] for a, b in zip(edges[:-1], edges[1:], strict=True))


def jump_integral_bound_check(
    nodes: ArrayLike,
    values: ArrayLike,
    etas: Sequence[float],
    *,
    lipschitz: float,
    dim: int = 2,
) -> JumpIntegralReport:
    """Evaluate the jump integrals of a Lipschitz boundary graph for each η.

    In 2D the graph is piecewise linear over the nodes, which span [-ρ, ρ] with f(0) = 0.
    In 3D the graph is radial, f(y) = g(|y|), with nodes spanning [0, ρ].

    Raises:
        ValueError: If the samples are not a Lipschitz graph with constant `lipschitz` through the origin
    """
    if dim not in (2, 3):
        msg = f"dimension must be 2 or 3, got {dim}"
        raise ValueError(msg)
    y = np.asarray(nodes, dtype=float)
    f = np.asarray(values, dtype=float)
    _check_graph(y, f, lipschitz)
    offsets = _probe_offsets(etas)
    rho = float(np.abs(y).max()) if dim == 2 else float(y[-1])  # noqa: PLR2004
    low = -rho if dim == 2 else 0.0  # noqa: PLR2004

    def graph(t: float) -> float:
        return float(np.interp(t, y, f))

    tangential, normal, comparison = [], [], []
    for eta in offsets:
        breaks = np.concatenate([y, eta * np.array([-10.0, -1.0, 1.0, 10.0]), [0.0]])

        def tangential_integrand(t: float, eta: float = eta) -> float:
            value, _ = jump_integrands([[t] + [0.0] * (dim - 2)], [graph(t)], eta, dim)
            weight = 1.0 if dim == 2 else 4 * t  # noqa: PLR2004
            return float(value[0, 0]) * weight

        def normal_integrand(t: float, eta: float = eta) -> float:
            _, value = jump_integrands([[t] + [0.0] * (dim - 2)], [graph(t)], eta, dim)
            weight = 1.0 if dim == 2 else 2 * math.pi * t  # noqa: PLR2004
            return float(value[0]) * weight

        tangential.append(_integrate(tangential_integrand, low, rho, breaks))
        normal.append(_integrate(normal_integrand, low, rho, breaks))
        comparison.append(comparison_integral(rho, eta, dim))

    tangential_arr = np.array(tangential)
    normal_arr = np.array(normal)
    comparison_arr = np.array(comparison)
    ratios = np.maximum(tangential_arr, normal_arr) / comparison_arr
    return JumpIntegralReport(
        etas=offsets,
        tangential=tangential_arr,
        normal=normal_arr,
        comparison=comparison_arr,
        ratios=ratios,
        sup_tangential=float(tangential_arr.max()),
        sup_normal=float(normal_arr.max()),
        growing=bool(ratios.max() > JUMP_GROWTH_FACTOR * ratios[0]),
    )
