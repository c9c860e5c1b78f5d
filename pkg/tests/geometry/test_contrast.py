"""Tests for refractive index profiles."""

import numpy as np
import pytest

from scatterlab.geometry import Contrast
from scatterlab.shapes import Disk


def test_contrast_constant() -> None:
    """Test a constant index."""
    contrast = Contrast.constant(4.0)

    assert contrast.is_constant
    assert not contrast.is_trivial
    assert np.allclose(contrast.evaluate([0.0, 0.5, 1.0]), 4.0)
    assert contrast.to_data() == {"type": "constant", "n": 4.0}


def test_contrast_radial_polynomial() -> None:
    """Test n(r) = 2 + r^2 about an off-centre disk."""
    contrast = Contrast(coefficients=(2.0, 0.0, 1.0))
    disk = Disk(center=(1.0, 0.0), radius=1.0)

    assert np.allclose(contrast.index_at(disk, [[1.0, 0.0], [1.5, 0.0], [1.0, -0.5]]), [2.0, 2.25, 2.25])
    assert contrast.to_data() == {"type": "radial", "coefficients": [2.0, 0.0, 1.0]}


def test_contrast_from_data() -> None:
    """Test parsing both contrast types."""
    assert Contrast.from_data({"type": "constant", "n": 2}) == Contrast.constant(2.0)
    assert Contrast.from_data({"type": "radial", "coefficients": [1, 1]}).coefficients == (1.0, 1.0)
    assert Contrast.from_data({"type": "constant", "n": 1.0}).is_trivial


def test_contrast_from_data_unknown_type() -> None:
    """Test that unknown contrast types are rejected."""
    with pytest.raises(ValueError, match="unknown contrast type"):
        Contrast.from_data({"type": "layered"})


def test_contrast_rejects_empty_and_nan() -> None:
    """Test that coefficients must be present and finite."""
    with pytest.raises(ValueError, match="finite coefficient"):
        Contrast(coefficients=())
    with pytest.raises(ValueError, match="finite coefficient"):
        Contrast(coefficients=(float("nan"),))
