"""Shared fixtures for solver tests."""

import pytest

from scatterlab.geometry import Contrast, Grid, MediumField, rasterize
from scatterlab.shapes import Disk


@pytest.fixture
def small_disk_medium() -> MediumField:
    """Rasterize a disk of radius 0.5 with n = 2 and spacing 0.02."""
    disk = Disk(radius=0.5)
    return rasterize(disk, Contrast.constant(2.0), Grid.around(disk, 0.02))


@pytest.fixture
def coarse_disk_medium() -> MediumField:
    """Rasterize a disk of radius 0.5 with n = 2 and spacing 0.05."""
    disk = Disk(radius=0.5)
    return rasterize(disk, Contrast.constant(2.0), Grid.around(disk, 0.05))
