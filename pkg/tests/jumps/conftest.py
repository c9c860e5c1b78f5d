"""Shared fixtures for jump tests."""

import pytest

from scatterlab.geometry import Contrast, Grid, rasterize
from scatterlab.shapes import Disk
from scatterlab.volpot import DensityField


@pytest.fixture
def disk_density() -> DensityField:
    """Create ψ = 1 on the unit disk with spacing 0.05 and a wide margin."""
    disk = Disk()
    medium = rasterize(disk, Contrast.constant(2.0), Grid.around(disk, 0.05, margin_cells=8))
    return DensityField.constant(medium)


@pytest.fixture
def linear_disk_density() -> DensityField:
    """Create ψ = 1 + x1 on the unit disk with spacing 0.05 and a wide margin."""
    disk = Disk()
    medium = rasterize(disk, Contrast.constant(2.0), Grid.around(disk, 0.05, margin_cells=8))
    return DensityField.from_function(medium, lambda x: 1 + x[:, 0])
