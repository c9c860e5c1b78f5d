"""Finite-difference check of Δv + k²v = 0."""

from __future__ import annotations

from typing import TYPE_CHECKING

import numpy as np

from scatterlab.waves.base import IncidentWave

if TYPE_CHECKING:
    from collections.abc import Callable

    from numpy.typing import ArrayLike


def verify_helmholtz(
    wave: IncidentWave | Callable[[np.ndarray], np.ndarray],
    points: ArrayLike,
    k: float | None = None,
    *,
    step: float = 1e-3,
) -> float:
    """Maximum of |Δ_h v + k² v| over the sample points, with the (2m+1)-point stencil.

    Args:
        wave: Incident wave, or any callable mapping (N, m) points to values
        points: Sample points away from any source, shape (N, m)
        k: Wavenumber, defaulting to the wave's own; k = 0 checks harmonicity
        step: Stencil step h

    Returns:
        The maximum residual, O(h² k⁴ |v|) for smooth waves
    """
    if isinstance(wave, IncidentWave):
        evaluate: Callable[[np.ndarray], np.ndarray] = wave.evaluate
        k = wave.k if k is None else k
    else:
        evaluate = wave
        if k is None:
            msg = "a wavenumber is required when checking a plain callable"
            raise ValueError(msg)
    if k < 0:
        msg = f"wavenumber must be non-negative, got {k}"
        raise ValueError(msg)
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    dim = pts.shape[1]
    center = np.asarray(evaluate(pts))
    laplacian = np.zeros(len(pts), dtype=complex)
    for axis in range(dim):
        offset = np.zeros(dim)
        offset[axis] = step
        laplacian += np.asarray(evaluate(pts + offset)) + np.asarray(evaluate(pts - offset)) - 2 * center
    laplacian /= step**2
    return float(np.abs(laplacian + k**2 * center).max())
