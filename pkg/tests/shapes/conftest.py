"""Shared fixtures for shape tests."""

import pytest

from scatterlab.shapes import Disk, Ellipse, Polygon


@pytest.fixture
def unit_square() -> Polygon:
    """Create the square [-0.5, 0.5]^2."""
    return Polygon(vertices=((-0.5, -0.5), (0.5, -0.5), (0.5, 0.5), (-0.5, 0.5)))


@pytest.fixture
def unit_disk() -> Disk:
    """Create the unit disk at the origin."""
    return Disk()


@pytest.fixture
def tilted_ellipse() -> Ellipse:
    """Create an off-centre ellipse rotated by 30 degrees."""
    return Ellipse(center=(0.2, -0.1), semi_axes=(1.0, 0.5), rotation=0.5235987755982988)
