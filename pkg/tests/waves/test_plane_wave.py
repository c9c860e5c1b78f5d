"""Tests for plane waves and point sources."""

import math

import numpy as np
import pytest

from scatterlab.kernels import SingularEvaluationError
from scatterlab.shapes import Disk
from scatterlab.waves import PlaneWave, PointSource, WaveError, eval_incident, verify_helmholtz


def test_plane_wave_values() -> None:
    """Test e^{ik ξ·x} at a few points."""
    wave = PlaneWave(k=2.0, direction=(0.0, 1.0))

    values = eval_incident(wave, [[0.0, 0.0], [5.0, math.pi / 4]])

    assert np.allclose(values, [1.0, 1j])


def test_plane_wave_from_angle() -> None:
    """Test construction from an angle."""
    wave = PlaneWave.from_angle(1.0, math.pi / 2)

    assert np.allclose(wave.direction, [0.0, 1.0])
    assert wave.dimension == 2


def test_plane_wave_solves_helmholtz(sample_points: np.ndarray) -> None:
    """Test the finite-difference Helmholtz residual in 2D and 3D."""
    assert verify_helmholtz(PlaneWave(k=3.0, direction=(0.6, 0.8)), sample_points) < 1e-4
    spatial = PlaneWave(k=3.0, direction=(0.0, 0.6, 0.8))
    assert verify_helmholtz(spatial, np.column_stack([sample_points, sample_points[:, 0]])) < 1e-4


def test_plane_wave_wrong_wavenumber_fails_check(sample_points: np.ndarray) -> None:
    """Test that checking with another k gives a large residual."""
    assert verify_helmholtz(PlaneWave(k=3.0), sample_points, k=2.0) > 1.0


def test_plane_wave_rejects_bad_parameters() -> None:
    """Test validation of the direction and wavenumber."""
    with pytest.raises(WaveError, match="unit vector"):
        PlaneWave(k=1.0, direction=(1.0, 1.0))
    with pytest.raises(WaveError, match="2D or 3D"):
        PlaneWave(k=1.0, direction=(1.0,))
    with pytest.raises(WaveError, match="positive"):
        PlaneWave(k=0.0)


def test_plane_wave_with_wavenumber() -> None:
    """Test that with_wavenumber keeps the direction."""
    wave = PlaneWave(k=1.0, direction=(0.0, 1.0)).with_wavenumber(4.0)

    assert wave.k == 4.0
    assert wave.direction == (0.0, 1.0)
    assert wave.to_data() == {"type": "plane", "k": 4.0, "direction": (0.0, 1.0)}


def test_point_source_solves_helmholtz(sample_points: np.ndarray) -> None:
    """Test that a point source solves the Helmholtz equation away from z0."""
    wave = PointSource(k=2.0, source=(3.0, 0.0))

    assert verify_helmholtz(wave, sample_points) < 1e-4


def test_point_source_singular_at_source() -> None:
    """Test that evaluating at z0 raises."""
    with pytest.raises(SingularEvaluationError):
        PointSource(k=1.0, source=(1.0, 2.0)).evaluate([[1.0, 2.0]])


def test_point_source_check_outside() -> None:
    """Test that sources in the closure of D are refused."""
    disk = Disk()
    PointSource(k=1.0, source=(2.0, 0.0)).check_outside(disk)

    with pytest.raises(WaveError, match="outside the closure"):
        PointSource(k=1.0, source=(0.5, 0.0)).check_outside(disk)
    with pytest.raises(WaveError, match="outside the closure"):
        PointSource(k=1.0, source=(0.0, 1.0)).check_outside(disk)


def test_verify_helmholtz_callable() -> None:
    """Test checking a plain harmonic function."""

    def harmonic(points: np.ndarray) -> np.ndarray:
        return points[:, 0] ** 2 - points[:, 1] ** 2

    assert verify_helmholtz(harmonic, [[0.3, 0.4]], 0.0) < 1e-6
    with pytest.raises(ValueError, match="wavenumber is required"):
        verify_helmholtz(harmonic, [[0.3, 0.4]])
    with pytest.raises(ValueError, match="non-negative"):
        verify_helmholtz(harmonic, [[0.3, 0.4]], -1.0)
