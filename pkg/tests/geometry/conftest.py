"""Shared fixtures for geometry tests."""

import pytest

from scatterlab.geometry import Grid
from scatterlab.shapes import Disk, Polygon


@pytest.fixture
def unit_square() -> Polygon:
    """Create the square [-0.5, 0.5]^2."""
    return Polygon(vertices=((-0.5, -0.5), (0.5, -0.5), (0.5, 0.5), (-0.5, 0.5)))


@pytest.fixture
def disk_grid() -> Grid:
    """Create a grid around the unit disk with spacing 0.05."""
    return Grid.around(Disk(), 0.05)
