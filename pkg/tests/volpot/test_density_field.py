"""Tests for densities on a grid."""

import numpy as np
import pytest

from scatterlab.geometry import Grid, MediumField
from scatterlab.shapes import Disk
from scatterlab.volpot import DensityField


def test_density_from_function(coarse_disk_medium: MediumField) -> None:
    """Test that ψ is sampled inside D and zero outside."""
    density = DensityField.from_function(coarse_disk_medium, lambda x: 1 + x[:, 0])

    assert np.all(density.values[~coarse_disk_medium.inside] == 0)
    assert np.isrealobj(density.values)
    assert density.sup_norm == pytest.approx(2.0, abs=0.1)
    assert not density.is_constant


def test_density_constant(coarse_disk_medium: MediumField) -> None:
    """Test a constant density and its extension."""
    density = DensityField.constant(coarse_disk_medium, 2.0)

    assert density.is_constant
    assert density.sup_norm == 2.0
    assert np.allclose(density.extension_at([[5.0, 5.0]]), 2.0)


def test_density_rejects_values_outside(coarse_disk_medium: MediumField) -> None:
    """Test that a density must vanish outside D."""
    with pytest.raises(ValueError, match="vanish outside"):
        DensityField(medium=coarse_disk_medium, values=np.ones(coarse_disk_medium.grid.counts))


def test_density_rejects_bad_holder_exponent(coarse_disk_medium: MediumField) -> None:
    """Test that the Hölder exponent must lie in (0, 1]."""
    values = np.where(coarse_disk_medium.inside, 1.0, 0.0)

    with pytest.raises(ValueError, match="Hölder exponent"):
        DensityField(medium=coarse_disk_medium, values=values, holder_exponent=1.5)


def test_density_rejects_non_finite(coarse_disk_medium: MediumField) -> None:
    """Test that NaN values are rejected."""
    values = np.where(coarse_disk_medium.inside, np.nan, 0.0)

    with pytest.raises(ValueError, match="finite"):
        DensityField(medium=coarse_disk_medium, values=values)


def test_density_extension_uses_nearest_cell(coarse_disk_medium: MediumField) -> None:
    """Test the nearest-cell extension of a sampled density."""
    values = np.where(coarse_disk_medium.inside, 3.0, 0.0)
    density = DensityField(medium=coarse_disk_medium, values=values)

    assert np.allclose(density.extension_at([[0.0, 1.01], [0.1, 0.1]]), 3.0)


def test_density_on_grid(coarse_disk_medium: MediumField) -> None:
    """Test re-sampling an analytic density on a finer grid."""
    density = DensityField.from_function(coarse_disk_medium, lambda x: x[:, 1] ** 2)

    finer = density.on_grid(Grid.around(Disk(), 0.025))

    assert finer.grid.spacing == 0.025
    centers, values = finer.support()
    assert np.allclose(values, centers[:, 1] ** 2)


def test_density_on_grid_requires_expression(coarse_disk_medium: MediumField) -> None:
    """Test that sampled densities cannot be re-sampled."""
    values = np.where(coarse_disk_medium.inside, 1.0, 0.0)
    density = DensityField(medium=coarse_disk_medium, values=values)

    with pytest.raises(ValueError, match="re-sampled"):
        density.on_grid(Grid.around(Disk(), 0.025))
