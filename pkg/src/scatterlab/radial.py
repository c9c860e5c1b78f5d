"""Transmission eigenvalues of radially symmetric media with constant index.

For a disk (ball) of radius R and index n, separation of variables reduces the interior
transmission problem of angular order ℓ to the vanishing of

    d_ℓ(k) = J_ℓ(k√n R) k J_ℓ'(kR) - J_ℓ(kR) k√n J_ℓ'(k√n R)

(spherical Bessel j_ℓ in 3D): the interior field J_ℓ(k√n r)e^{iℓθ} and the free field
J_ℓ(kr)e^{iℓθ} then share Cauchy data on r = R.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Any, NamedTuple

import numpy as np
import pandas as pd
from scipy import optimize, special

from scatterlab.geometry import Contrast
from scatterlab.shapes import Ball, Disk, Polygon
from scatterlab.waves import FourierDensity, HerglotzWave

if TYPE_CHECKING:
    from collections.abc import Callable

    from numpy.typing import ArrayLike

    from scatterlab.shapes import Shape

MIN_CONTRAST = 1e-6
ROOT_TOLERANCE = 1e-13
EIGEN_RESIDUAL_TOLERANCE = 1e-6


class SpectrumError(ValueError):
    """Raised for invalid spectrum searches or mismatched eigenpairs."""


@dataclass(frozen=True, kw_only=True)
class RadialMedium:
    """Disk or ball of radius R centred at the origin with constant index n ≠ 1."""

    dimension: int = 2
    radius: float = 1.0
    index: float = 4.0

    def __post_init__(self) -> None:
        if self.dimension not in (2, 3):
            msg = f"radial medium dimension must be 2 or 3, got {self.dimension}"
            raise SpectrumError(msg)
        if not self.radius > 0 or not self.index > 0:
            msg = "radial medium needs a positive radius and index"
            raise SpectrumError(msg)
        if abs(self.index - 1) < MIN_CONTRAST:
            msg = f"index {self.index} is within {MIN_CONTRAST} of 1; the determinant vanishes identically"
            raise SpectrumError(msg)

    def shape(self) -> Shape:
        if self.dimension == 2:  # noqa: PLR2004
            return Disk(radius=self.radius)
        return Ball(radius=self.radius)

    def contrast(self) -> Contrast:
        return Contrast.constant(self.index)

    @property
    def max_step(self) -> float:
        """Largest scan step that keeps two roots of one d_ℓ out of a single step."""
        return math.pi / (4 * self.radius * max(1.0, math.sqrt(self.index)))


class SpectrumRoot(NamedTuple):
    order: int
    k: float
    residual: float
    bracket: tuple[float, float]


class TransmissionSpectrum(NamedTuple):
    roots: tuple[SpectrumRoot, ...]
    k_min: float
    k_max: float

    def of_order(self, order: int) -> list[float]:
        return [root.k for root in self.roots if root.order == order]

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {
                "order": [root.order for root in self.roots],
                "k": [root.k for root in self.roots],
                "residual": [root.residual for root in self.roots],
            }
        )

    def to_data(self) -> dict[str, Any]:
        return {
            "k_min": self.k_min,
            "k_max": self.k_max,
            "roots": [
                {"order": r.order, "k": r.k, "residual": r.residual, "bracket": list(r.bracket)} for r in self.roots
            ],
        }


def _bessel(dimension: int, order: int, x: np.ndarray, *, derivative: bool = False) -> np.ndarray:
    if dimension == 2:  # noqa: PLR2004
        return special.jvp(order, x) if derivative else special.jv(order, x)
    return special.spherical_jn(order, x, derivative=derivative)


def te_determinant(medium: RadialMedium, order: int, k: ArrayLike) -> Any:
    """Evaluate d_ℓ(k); real for real inputs.

    Raises:
        SpectrumError: If any k <= 0 or the order is negative
    """
    ks = np.asarray(k, dtype=float)
    if np.any(ks <= 0):
        msg = "the transmission determinant needs k > 0"
        raise SpectrumError(msg)
    if order < 0:
        msg = f"angular order must be non-negative, got {order}"
        raise SpectrumError(msg)
    root_n = math.sqrt(medium.index)
    inner = ks * root_n * medium.radius
    outer = ks * medium.radius
    dim = medium.dimension
    value = _bessel(dim, order, inner) * ks * _bessel(dim, order, outer, derivative=True) - _bessel(
        dim, order, outer
    ) * ks * root_n * _bessel(dim, order, inner, derivative=True)
    return float(value) if value.ndim == 0 else value


def determinant_scale(medium: RadialMedium, order: int, k: float) -> float:
    """Size of the two products in d_ℓ(k), used to judge residuals."""
    root_n = math.sqrt(medium.index)
    inner = np.array(k * root_n * medium.radius)
    outer = np.array(k * medium.radius)
    dim = medium.dimension
    first = abs(_bessel(dim, order, inner) * _bessel(dim, order, outer, derivative=True))
    second = root_n * abs(_bessel(dim, order, outer) * _bessel(dim, order, inner, derivative=True))
    return float(k * (first + second))


def te_spectrum(
    medium: RadialMedium,
    max_order: int,
    k_min: float,
    k_max: float,
    step: float | None = None,
    *,
    progress_callback: Callable[[int], None] | None = None,
) -> TransmissionSpectrum:
    """Scan d_ℓ over [k_min, k_max] for ℓ = 0..max_order and polish each sign change by bisection.

    Args:
        medium: Radial medium
        max_order: Highest angular order ℓ
        k_min: Lower end of the search range, positive
        k_max: Upper end of the search range
        step: Scan step, at most π / (4R max(1, √n)); half of that by default
        progress_callback: Called with 1 after each order

    Returns:
        TransmissionSpectrum with roots sorted by k, then order

    Raises:
        SpectrumError: If the range is empty or the step too coarse
    """
    if not 0 < k_min < k_max:
        msg = f"search range [{k_min}, {k_max}] is empty or not positive"
        raise SpectrumError(msg)
    step = medium.max_step / 2 if step is None else step
    if not 0 < step <= medium.max_step:
        msg = f"scan step {step} must lie in (0, {medium.max_step:.6g}]"
        raise SpectrumError(msg)
    count = math.ceil((k_max - k_min) / step)
    nodes = np.linspace(k_min, k_max, count + 1)

    roots: list[SpectrumRoot] = []
    for order in range(max_order + 1):
        values = te_determinant(medium, order, nodes)
        for i in range(count):
            a, b = float(nodes[i]), float(nodes[i + 1])
            if values[i] == 0:
                k = a
            elif values[i] * values[i + 1] < 0:
                k = float(
                    optimize.bisect(lambda x, order=order: te_determinant(medium, order, x), a, b, xtol=ROOT_TOLERANCE)
                )
            else:
                continue
            roots.append(
                SpectrumRoot(order=order, k=k, residual=abs(te_determinant(medium, order, k)), bracket=(a, b))
            )
        if progress_callback:
            progress_callback(1)
    roots.sort(key=lambda root: (root.k, root.order))
    return TransmissionSpectrum(roots=tuple(roots), k_min=k_min, k_max=k_max)


def herglotz_mode_factor(order: int) -> complex:
    """The Herglotz wave of e^{iℓθ} equals this factor times J_ℓ(kr) e^{iℓθ}."""
    return complex(1j**order)


def eigen_incident(medium: RadialMedium, order: int, k_root: float) -> HerglotzWave:
    """Herglotz wave with density e^{iℓθ}, the free part of the radial eigenpair at k_root.

    Its field is i^ℓ J_ℓ(kr) e^{iℓθ} (see `herglotz_mode_factor`).

    Raises:
        SpectrumError: If k_root is not a root of d_ℓ or the medium is not planar
    """
    if medium.dimension != 2:  # noqa: PLR2004
        msg = "eigen densities are built for planar media only"
        raise SpectrumError(msg)
    residual = abs(te_determinant(medium, order, k_root))
    scale = determinant_scale(medium, order, k_root)
    if residual > EIGEN_RESIDUAL_TOLERANCE * max(scale, 1.0):
        msg = f"k={k_root} is not a transmission eigenvalue of order {order} (|d|={residual:.3e})"
        raise SpectrumError(msg)
    return HerglotzWave(k=k_root, density=FourierDensity.mode(order))


def dirichlet_wavenumbers(shape: Shape, k_max: float) -> np.ndarray:
    """Sorted distinct k <= k_max with k² a Dirichlet eigenvalue of -Δ in the shape.

    Supported shapes are disks and axis-aligned rectangles.
    """
    if not k_max > 0:
        return np.array([])
    if isinstance(shape, Disk):
        found: list[float] = []
        order = 0
        while True:
            count = 1
            zeros = special.jn_zeros(order, count)
            if zeros[0] / shape.radius > k_max:
                break
            while zeros[-1] / shape.radius <= k_max:
                count *= 2
                zeros = special.jn_zeros(order, count)
            found.extend(z / shape.radius for z in zeros if z / shape.radius <= k_max)
            order += 1
        return np.unique(np.round(found, 12))
    if isinstance(shape, Polygon) and shape.is_axis_aligned_rectangle():
        low, high = shape.bounding_box()
        width, height = high - low
        p_max = math.floor(k_max * width / math.pi)
        q_max = math.floor(k_max * height / math.pi)
        values = [
            math.pi * math.hypot(p / width, q / height) for p in range(1, p_max + 1) for q in range(1, q_max + 1)
        ]
        return np.unique(np.round([v for v in values if v <= k_max], 12))
    msg = f"Dirichlet wavenumbers are available for disks and axis-aligned rectangles, not {shape.type}"
    raise SpectrumError(msg)
