"""Fundamental solutions of the Laplace and Helmholtz operators in 2D and 3D.

Sign convention: -ΔΦ = δ and (Δ + k²)Φ_k = -δ.

Both kernels are radial, Φ = g(r) with r = |x - y|, so their derivatives with respect to x
follow from g', g'':

    ∇Φ = g'(r) d / r
    ∇²Φ = g''(r) d dᵀ / r² + g'(r) / r (I - d dᵀ / r²)

where d = x - y.
"""

from __future__ import annotations

import math
from typing import TYPE_CHECKING, NamedTuple

import numpy as np
from scipy import special

if TYPE_CHECKING:
    from collections.abc import Iterable

    from numpy.typing import ArrayLike

SURFACE_AREAS = {2: 2 * math.pi, 3: 4 * math.pi}


class SingularEvaluationError(ValueError):
    """Raised when a kernel is evaluated at coincident points."""


class KernelEval(NamedTuple):
    value: complex
    gradient: np.ndarray
    hessian: np.ndarray
    distance: float


class KernelBoundsReport(NamedTuple):
    """Fitted constants C in |∇Φ| <= C / r^(m-1) and |∂²Φ| <= C / r^m."""

    gradient_constant: float
    hessian_constant: float
    gradient_pass: bool
    hessian_pass: bool
    sample_count: int


def _check_dimension(dim: int) -> None:
    if dim not in SURFACE_AREAS:
        msg = f"dimension must be 2 or 3, got {dim}"
        raise ValueError(msg)


def _check_wavenumber(k: float) -> None:
    if not k > 0:
        msg = f"wavenumber must be positive, got {k}"
        raise ValueError(msg)


def laplace_radial(r: np.ndarray, dim: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Return g, g', g'' for the Laplace kernel at distances r > 0."""
    if dim == 3:  # noqa: PLR2004
        g = 1 / (4 * np.pi * r)
        return g, -g / r, 2 * g / r**2
    g1 = -1 / (2 * np.pi * r)
    return -np.log(r) / (2 * np.pi), g1, -g1 / r


def helmholtz_radial(r: np.ndarray, k: float, dim: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Return g, g', g'' for the outgoing Helmholtz kernel at distances r > 0."""
    kr = k * r
    if dim == 3:  # noqa: PLR2004
        phase = np.exp(1j * kr) / (4 * np.pi)
        return (
            phase / r,
            phase * (1j * kr - 1) / r**2,
            phase * (2 - 2j * kr - kr**2) / r**3,
        )
    h0 = special.hankel1(0, kr)
    h1 = special.hankel1(1, kr)
    return 0.25j * h0, -0.25j * k * h1, -0.25j * k**2 * (h0 - h1 / kr)


def radial_profile(r: ArrayLike, dim: int, k: float | None = None) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Return g, g', g'' for the Laplace kernel (k is None) or the Helmholtz kernel."""
    _check_dimension(dim)
    distance = np.asarray(r, dtype=float)
    if np.any(distance <= 0):
        msg = "kernel evaluated at coincident points"
        raise SingularEvaluationError(msg)
    if k is None:
        return laplace_radial(distance, dim)
    _check_wavenumber(k)
    return helmholtz_radial(distance, k, dim)


def kernel_values(d: np.ndarray, dim: int, k: float | None = None) -> np.ndarray:
    """Kernel values for difference vectors d = x - y with shape (..., m)."""
    g, _, _ = radial_profile(np.linalg.norm(d, axis=-1), dim, k)
    return g


def kernel_gradients(d: np.ndarray, dim: int, k: float | None = None) -> np.ndarray:
    """Gradients with respect to x, shape (..., m)."""
    r = np.linalg.norm(d, axis=-1)
    _, g1, _ = radial_profile(r, dim, k)
    return (g1 / r)[..., np.newaxis] * d


def kernel_hessians(d: np.ndarray, dim: int, k: float | None = None) -> np.ndarray:
    """Hessians with respect to x, shape (..., m, m)."""
    r = np.linalg.norm(d, axis=-1)
    _, g1, g2 = radial_profile(r, dim, k)
    unit = d / r[..., np.newaxis]
    outer = unit[..., :, np.newaxis] * unit[..., np.newaxis, :]
    identity = np.eye(d.shape[-1])
    return g2[..., np.newaxis, np.newaxis] * outer + (g1 / r)[..., np.newaxis, np.newaxis] * (identity - outer)


def _evaluate(x: ArrayLike, y: ArrayLike, dim: int | None, k: float | None) -> KernelEval:
    xv = np.asarray(x, dtype=float)
    yv = np.asarray(y, dtype=float)
    if xv.shape != yv.shape or xv.ndim != 1:
        msg = f"points must be vectors of equal length, got shapes {xv.shape} and {yv.shape}"
        raise ValueError(msg)
    if dim is None:
        dim = len(xv)
    elif dim != len(xv):
        msg = f"points have dimension {len(xv)}, expected {dim}"
        raise ValueError(msg)
    d = xv - yv
    r = float(np.linalg.norm(d))
    g, g1, g2 = radial_profile(np.array([r]), dim, k)
    unit = d / r
    outer = np.outer(unit, unit)
    hessian = g2[0] * outer + g1[0] / r * (np.eye(dim) - outer)
    return KernelEval(
        value=complex(g[0]),
        gradient=np.asarray(g1[0] * unit, dtype=complex),
        hessian=np.asarray((hessian + hessian.T) / 2, dtype=complex),
        distance=r,
    )


def laplace_kernel(x: ArrayLike, y: ArrayLike, dim: int | None = None) -> KernelEval:
    """Evaluate Φ(x, y) with its gradient and Hessian in x.

    Args:
        x: Evaluation point
        y: Source point, distinct from x
        dim: Space dimension (2 or 3), inferred from the points when omitted

    Returns:
        KernelEval with zero imaginary parts

    Raises:
        SingularEvaluationError: If x == y
    """
    return _evaluate(x, y, dim, None)


def helmholtz_kernel(x: ArrayLike, y: ArrayLike, k: float, dim: int | None = None) -> KernelEval:
    """Evaluate the outgoing Φ_k(x, y) with its gradient and Hessian in x.

    3D: e^{ikr} / (4πr). 2D: (i/4) H0(kr).

    Raises:
        SingularEvaluationError: If x == y
        ValueError: If k <= 0
    """
    _check_wavenumber(k)
    return _evaluate(x, y, dim, k)


def kernel_bounds_check(
    samples: Iterable[tuple[ArrayLike, ArrayLike]],
    *,
    k: float | None = None,
    gradient_limit: float = 1.0,
    hessian_limit: float = 1.0,
) -> KernelBoundsReport:
    """Fit the derivative-estimate constants of the kernel over sample pairs with 0 < |x - y| < 1.

    Raises:
        ValueError: If no samples are given or a pair is out of range
    """
    pairs = list(samples)
    if not pairs:
        msg = "kernel_bounds_check needs at least one sample pair"
        raise ValueError(msg)
    x = np.array([p[0] for p in pairs], dtype=float)
    y = np.array([p[1] for p in pairs], dtype=float)
    d = x - y
    dim = d.shape[1]
    r = np.linalg.norm(d, axis=1)
    if np.any(r <= 0) or np.any(r >= 1):
        msg = "sample pairs must satisfy 0 < |x - y| < 1"
        raise ValueError(msg)
    gradient = np.abs(kernel_gradients(d, dim, k))
    hessian = np.abs(kernel_hessians(d, dim, k))
    gradient_constant = float((gradient.max(axis=1) * r ** (dim - 1)).max())
    hessian_constant = float((hessian.max(axis=(1, 2)) * r**dim).max())
    return KernelBoundsReport(
        gradient_constant=gradient_constant,
        hessian_constant=hessian_constant,
        gradient_pass=gradient_constant <= gradient_limit,
        hessian_pass=hessian_constant <= hessian_limit,
        sample_count=len(pairs),
    )


def equal_measure_radius(h: float, dim: int) -> float:
    """Radius of the disk or ball with the same measure as a cell of side h."""
    _check_dimension(dim)
    if dim == 2:  # noqa: PLR2004
        return h / math.sqrt(math.pi)
    return h * (3 / (4 * math.pi)) ** (1 / 3)


def self_cell_integral(h: float, dim: int, k: float | None = None) -> complex:
    """Integral of the kernel over the equal-measure disk or ball centred at the singularity."""
    rho = equal_measure_radius(h, dim)
    if k is None:
        if dim == 3:  # noqa: PLR2004
            return rho**2 / 2
        return rho**2 / 4 * (1 - 2 * math.log(rho))
    _check_wavenumber(k)
    if dim == 3:  # noqa: PLR2004
        return complex(np.exp(1j * k * rho) * (1 / k**2 - 1j * rho / k) - 1 / k**2)
    return complex(1j * math.pi * rho / (2 * k) * special.hankel1(1, k * rho) - 1 / k**2)


def far_field_constant(k: float, dim: int) -> complex:
    """Constant c_m in Φ_k(x, y) ~ c_m e^{ik|x|} / |x|^((m-1)/2) e^{-ik x̂·y} as |x| → ∞."""
    _check_wavenumber(k)
    _check_dimension(dim)
    if dim == 3:  # noqa: PLR2004
        return 1 / (4 * math.pi)
    return complex(np.exp(1j * math.pi / 4) / math.sqrt(8 * math.pi * k))
