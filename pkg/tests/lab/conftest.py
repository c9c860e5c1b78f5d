"""Shared fixtures for lab tests."""

from typing import Any

import pytest

from scatterlab.lab import ExperimentConfig, load_config


@pytest.fixture
def sweep_data() -> dict[str, Any]:
    """Create a small disk sweep: 2 levels, 3 wavenumbers, 1 plane wave."""
    return {
        "kind": "sweep",
        "shape": {"type": "disk", "center": [0.0, 0.0], "radius": 0.5},
        "contrast": {"type": "constant", "n": 2.0},
        "waves": [{"type": "plane", "direction": [1.0, 0.0]}],
        "k_range": {"start": 1.0, "stop": 2.0, "step": 0.5},
        "levels": [0.05, 0.1],
        "far_field_directions": 32,
        "seed": 3,
    }


@pytest.fixture
def sweep_config(sweep_data: dict[str, Any]) -> ExperimentConfig:
    """Create the validated small disk sweep."""
    return load_config(sweep_data)


@pytest.fixture
def radial_data() -> dict[str, Any]:
    """Create a radial run around the first order-0 root of the unit disk with n = 4."""
    return {
        "kind": "radial_nonscatter",
        "shape": {"type": "disk", "center": [0.0, 0.0], "radius": 1.0},
        "contrast": {"type": "constant", "n": 4.0},
        "levels": [0.05],
        "far_field_directions": 32,
        "radial": {
            "max_order": 0,
            "k_min": 3.0,
            "k_max": 3.6,
            "roots_per_order": {"0": 1},
            "offset": 0.1,
            "determinant_samples": 50,
        },
    }


@pytest.fixture
def jump_data() -> dict[str, Any]:
    """Create a jump probe at (1, 0) on the unit disk."""
    return {
        "kind": "jump_probe",
        "shape": {"type": "disk", "center": [0.0, 0.0], "radius": 1.0},
        "contrast": {"type": "constant", "n": 2.0},
        "levels": [0.05],
        "probe": {"etas": [0.3, 0.1], "points": [[1.0, 0.0]]},
    }


@pytest.fixture
def source_data() -> dict[str, Any]:
    """Create a two-level non-radiating source run on a small disk."""
    return {
        "kind": "nonradiating_source",
        "shape": {"type": "disk", "center": [0.0, 0.0], "radius": 0.5},
        "levels": [0.1, 0.05],
        "far_field_directions": 32,
        "source": {"k": 2.0},
    }


@pytest.fixture
def stationary_data() -> dict[str, Any]:
    """Create a short stationary-phase ladder over two random densities."""
    return {
        "kind": "stationary_phase",
        "seed": 11,
        "stationary": {"ks": [10.0, 20.0], "densities": 2, "max_order": 2, "radii": 16, "angles": 2},
    }
