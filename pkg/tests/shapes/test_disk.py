"""Tests for disk and ball shapes."""

import math

import numpy as np
import pytest

from scatterlab.shapes import Ball, Disk, ShapeError


def test_disk_contains(unit_disk: Disk) -> None:
    """Test that the boundary belongs to neither side."""
    inside = unit_disk.contains([[0.0, 0.0], [0.999, 0.0], [1.0, 0.0], [0.0, -1.2]])

    assert inside.tolist() == [True, True, False, False]


def test_disk_boundary_sample(unit_disk: Disk) -> None:
    """Test that samples lie on the circle with radial normals."""
    sample = unit_disk.boundary_sample(32)

    assert np.allclose(np.linalg.norm(sample.points, axis=1), 1.0)
    assert np.allclose(sample.normals, sample.points)
    assert not sample.corners.any()
    assert sample.weights.sum() == pytest.approx(2 * math.pi)


def test_disk_distance_to_boundary() -> None:
    """Test the closed-form distance."""
    disk = Disk(center=(1.0, 1.0), radius=0.5)

    assert np.allclose(disk.distance_to_boundary([[1.0, 1.0], [2.0, 1.0]]), [0.5, 0.5])


def test_disk_rejects_bad_radius() -> None:
    """Test that non-positive radii are rejected."""
    with pytest.raises(ShapeError, match="positive"):
        Disk(radius=0.0)


def test_disk_rejects_wrong_dimension(unit_disk: Disk) -> None:
    """Test that 3D points are rejected by a 2D shape."""
    with pytest.raises(ShapeError, match="dimension 2"):
        unit_disk.contains([[0.0, 0.0, 0.0]])


def test_disk_rejects_non_finite_points(unit_disk: Disk) -> None:
    """Test that NaN coordinates are rejected."""
    with pytest.raises(ShapeError, match="finite"):
        unit_disk.contains([[math.nan, 0.0]])


def test_ball_measures() -> None:
    """Test volume, surface area and the Fibonacci boundary sample."""
    ball = Ball(radius=2.0)

    assert ball.dimension == 3
    assert ball.measure() == pytest.approx(32 * math.pi / 3)
    assert ball.perimeter() == pytest.approx(16 * math.pi)
    sample = ball.boundary_sample(200)
    assert np.allclose(np.linalg.norm(sample.points, axis=1), 2.0)
    assert sample.weights.sum() == pytest.approx(16 * math.pi)
    assert ball.contains([[0.0, 0.0, 1.9], [0.0, 2.1, 0.0]]).tolist() == [True, False]


def test_ball_rotation_unsupported() -> None:
    """Test that 3D shapes refuse planar rotation."""
    with pytest.raises(ShapeError, match="rotation"):
        Ball().rotated(0.1)
