"""Herglotz wave functions v(x) = (1/2π) ∮ φ(ξ) e^{ik ξ·x} ds_ξ in the plane."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import TYPE_CHECKING, Any, Self

import numpy as np

from scatterlab.constants import HERGLOTZ_MIN_NODES, HERGLOTZ_NODES_PER_KR, QUADRATURE_CHUNK_ENTRIES
from scatterlab.shapes.base import as_points
from scatterlab.waves.base import IncidentWave, WaveError

if TYPE_CHECKING:
    from numpy.typing import ArrayLike

_MODULUS_SAMPLES = 4096


def _as_complex(value: Any) -> complex:
    """Accept complex numbers, reals, or JSON [re, im] pairs."""
    if isinstance(value, list | tuple):
        re, im = value
        return complex(float(re), float(im))
    return complex(value)


@dataclass(frozen=True, kw_only=True)
class FourierDensity:
    """Density φ(θ) = Σ c_n e^{inθ} on the unit circle."""

    orders: tuple[int, ...] = (0,)
    coefficients: tuple[complex, ...] = (1.0,)

    def __post_init__(self) -> None:
        orders = tuple(int(n) for n in self.orders)
        coefficients = tuple(_as_complex(c) for c in self.coefficients)
        if len(orders) != len(coefficients) or not orders:
            msg = "Fourier density needs matching, non-empty orders and coefficients"
            raise WaveError(msg)
        if len(set(orders)) != len(orders):
            msg = "Fourier density orders must be distinct"
            raise WaveError(msg)
        object.__setattr__(self, "orders", orders)
        object.__setattr__(self, "coefficients", coefficients)

    @classmethod
    def constant(cls, value: complex = 1.0) -> Self:
        return cls(orders=(0,), coefficients=(value,))

    @classmethod
    def mode(cls, order: int) -> Self:
        """Single mode e^{i order θ}."""
        return cls(orders=(order,), coefficients=(1.0,))

    @classmethod
    def random(cls, rng: np.random.Generator, *, max_order: int = 4, ripple: float = 0.4) -> Self:
        """Random density 1 + Σ c_n e^{inθ} with Σ|c_n| = ripple over the non-zero orders.

        The modulus stays at least 1 - ripple and the C¹ norm at most 1 + (1 + max_order) * ripple.
        """
        orders = [n for n in range(-max_order, max_order + 1) if n != 0]
        raw = rng.normal(size=len(orders)) + 1j * rng.normal(size=len(orders))
        raw *= ripple / np.abs(raw).sum()
        return cls(orders=(0, *orders), coefficients=(1.0, *(complex(c) for c in raw)))

    @classmethod
    def from_data(cls, data: dict[str, Any]) -> Self:
        return cls(orders=tuple(data["orders"]), coefficients=tuple(data["coefficients"]))

    def to_data(self) -> dict[str, Any]:
        return {
            "orders": list(self.orders),
            "coefficients": [[c.real, c.imag] for c in self.coefficients],
        }

    def __call__(self, theta: ArrayLike) -> np.ndarray:
        angles = np.asarray(theta, dtype=float)
        return np.exp(1j * np.multiply.outer(angles, np.array(self.orders))) @ np.array(self.coefficients)

    @property
    def max_order(self) -> int:
        return max(abs(n) for n in self.orders)

    @property
    def mean(self) -> complex:
        """Average of φ over the circle."""
        return dict(zip(self.orders, self.coefficients, strict=True)).get(0, 0j)

    @property
    def c1_norm(self) -> float:
        """Upper bound Σ (1 + |n|) |c_n| on the C¹ norm."""
        return float(sum((1 + abs(n)) * abs(c) for n, c in zip(self.orders, self.coefficients, strict=True)))

    def min_modulus(self) -> float:
        """Minimum of |φ| over a fine sample of the circle."""
        theta = 2 * np.pi * np.arange(_MODULUS_SAMPLES) / _MODULUS_SAMPLES
        return float(np.abs(self(theta)).min())

    def scaled(self, factor: complex) -> Self:
        return type(self)(orders=self.orders, coefficients=tuple(factor * c for c in self.coefficients))


@lru_cache(maxsize=64)
def quadrature_nodes(count: int) -> tuple[np.ndarray, np.ndarray]:
    """Read-only trapezoidal nodes θ_q and directions ξ_q on the unit circle."""
    theta = 2 * np.pi * np.arange(count) / count
    directions = np.column_stack([np.cos(theta), np.sin(theta)])
    theta.flags.writeable = False
    directions.flags.writeable = False
    return theta, directions


def herglotz_node_count(k: float, radius: float, density: FourierDensity, minimum: int = HERGLOTZ_MIN_NODES) -> int:
    """Trapezoidal node count: at least 8 k |x|, and enough to integrate the density exactly at x = 0."""
    return max(minimum, math.ceil(HERGLOTZ_NODES_PER_KR * k * radius), 2 * density.max_order + 1)


@dataclass(frozen=True, kw_only=True)
class HerglotzWave(IncidentWave):
    """Superposition of plane waves over all directions with a Fourier density."""

    type: str = "herglotz"

    density: FourierDensity

    def __post_init__(self) -> None:
        super().__post_init__()
        if isinstance(self.density, dict):
            object.__setattr__(self, "density", FourierDensity.from_data(self.density))

    @property
    def dimension(self) -> int:
        return 2

    def evaluate(self, points: ArrayLike, *, min_nodes: int = HERGLOTZ_MIN_NODES) -> np.ndarray:
        pts = as_points(points, 2)
        radius = float(np.linalg.norm(pts, axis=1).max(initial=0.0))
        theta, directions = quadrature_nodes(herglotz_node_count(self.k, radius, self.density, min_nodes))
        weights = self.density(theta) / len(theta)
        result = np.empty(len(pts), dtype=complex)
        size = max(1, QUADRATURE_CHUNK_ENTRIES // len(theta))
        for start in range(0, len(pts), size):
            block = pts[start : start + size]
            result[start : start + size] = np.exp(1j * self.k * (block @ directions.T)) @ weights
        return result

    def to_data(self) -> dict[str, Any]:
        return {"type": self.type, "k": self.k, "density": self.density.to_data()}
