"""Shared fixtures for wave tests."""

import numpy as np
import pytest


@pytest.fixture
def sample_points() -> np.ndarray:
    """Create planar points in the annulus 0.2 < |x| < 1.5."""
    rng = np.random.default_rng(3)
    radius = rng.uniform(0.2, 1.5, size=12)
    angle = rng.uniform(0, 2 * np.pi, size=12)
    return np.column_stack([radius * np.cos(angle), radius * np.sin(angle)])


@pytest.fixture
def rng() -> np.random.Generator:
    """Create a seeded random generator."""
    return np.random.default_rng(1234)
