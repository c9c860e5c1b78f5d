"""Shared fixtures for volume potential tests."""

import pytest

from scatterlab.geometry import Contrast, Grid, MediumField, rasterize
from scatterlab.shapes import Disk


@pytest.fixture
def disk_medium() -> MediumField:
    """Rasterize the unit disk with spacing 0.02."""
    disk = Disk()
    return rasterize(disk, Contrast.constant(2.0), Grid.around(disk, 0.02))


@pytest.fixture
def coarse_disk_medium() -> MediumField:
    """Rasterize the unit disk with spacing 0.05."""
    disk = Disk()
    return rasterize(disk, Contrast.constant(2.0), Grid.around(disk, 0.05))
