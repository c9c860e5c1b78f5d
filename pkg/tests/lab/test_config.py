"""Tests for experiment configuration loading and validation."""

import json
from pathlib import Path
from typing import Any

import numpy as np
import pytest
from pydantic import ValidationError

from scatterlab.constants import SOLVER_MAX_ITERATIONS, SOLVER_RESTART
from scatterlab.lab import ConfigError, ExperimentConfig, load_config

CONFIGS_DIR = Path(__file__).parents[2] / "configs"


def test_load_config_sorts_levels(sweep_data: dict[str, Any]) -> None:
    """Test that levels are kept coarse to fine."""
    config = load_config(sweep_data)

    assert config.levels == [0.1, 0.05]
    assert config.kind == "sweep"
    assert config.wave_labels() == ["plane0"]


def test_load_config_from_file(tmp_path: Path, sweep_data: dict[str, Any]) -> None:
    """Test loading a JSON file."""
    path = tmp_path / "sweep.json"
    path.write_text(json.dumps(sweep_data))

    assert load_config(path) == load_config(sweep_data)


def test_load_config_file_errors(tmp_path: Path) -> None:
    """Test missing, malformed and non-object config files."""
    with pytest.raises(ConfigError, match="not found"):
        load_config(tmp_path / "missing.json")

    broken = tmp_path / "broken.json"
    broken.write_text("{not json")
    with pytest.raises(ConfigError, match="invalid JSON"):
        load_config(broken)

    listing = tmp_path / "list.json"
    listing.write_text("[1, 2]")
    with pytest.raises(ConfigError, match="JSON object"):
        load_config(listing)


def test_k_range_values(sweep_config: ExperimentConfig) -> None:
    """Test that the k range includes both ends."""
    assert sweep_config.k_range is not None
    assert np.allclose(sweep_config.k_range.values(), [1.0, 1.5, 2.0])


@pytest.mark.parametrize(
    "k_range",
    [
        {"start": 2.0, "stop": 2.0, "step": 0.1},
        {"start": 3.0, "stop": 2.0, "step": 0.1},
        {"start": 1.0, "stop": 2.0, "step": 0.0},
    ],
)
def test_empty_k_range_rejected(sweep_data: dict[str, Any], k_range: dict[str, float]) -> None:
    """Test that empty or non-increasing k ranges are invalid."""
    with pytest.raises(ValidationError):
        load_config({**sweep_data, "k_range": k_range})


def test_duplicate_levels_rejected(sweep_data: dict[str, Any]) -> None:
    """Test that repeated grid levels are invalid."""
    with pytest.raises(ValidationError, match="distinct"):
        load_config({**sweep_data, "levels": [0.1, 0.1]})


def test_sweep_needs_k_range_and_waves(sweep_data: dict[str, Any]) -> None:
    """Test the sweep-specific requirements."""
    without_range = {key: value for key, value in sweep_data.items() if key != "k_range"}
    with pytest.raises(ValidationError, match="k_range"):
        load_config(without_range)
    with pytest.raises(ValidationError, match="incident wave"):
        load_config({**sweep_data, "waves": []})


def test_wave_templates_refuse_wavenumber(sweep_data: dict[str, Any]) -> None:
    """Test that the k of a wave comes from the sweep, not the template."""
    with pytest.raises(ValidationError, match="drop the 'k' field"):
        load_config({**sweep_data, "waves": [{"type": "plane", "k": 2.0}]})


def test_unknown_shape_and_contrast_rejected(sweep_data: dict[str, Any]) -> None:
    """Test that malformed shape and contrast objects are invalid."""
    with pytest.raises(ValidationError):
        load_config({**sweep_data, "shape": {"type": "torus"}})
    with pytest.raises(ValidationError, match="invalid contrast"):
        load_config({**sweep_data, "contrast": {"type": "constant"}})
    with pytest.raises(ValidationError):
        load_config({**sweep_data, "unknown_field": 1})


def test_convergence_kinds_need_two_levels(sweep_data: dict[str, Any]) -> None:
    """Test that corner sweeps refuse a single grid level."""
    with pytest.raises(ValidationError, match="at least 2 grid levels"):
        load_config({**sweep_data, "kind": "corner_scatter", "levels": [0.05]})


def test_radial_needs_centred_constant_disk(radial_data: dict[str, Any]) -> None:
    """Test the radial experiment shape requirements."""
    load_config(radial_data)

    shifted = {**radial_data, "shape": {"type": "disk", "center": [0.1, 0.0], "radius": 1.0}}
    with pytest.raises(ValidationError, match="centred at the origin"):
        load_config(shifted)
    square = {**radial_data, "shape": {"type": "polygon", "vertices": [[0, 0], [1, 0], [1, 1], [0, 1]]}}
    with pytest.raises(ValidationError, match="disk or ball"):
        load_config(square)


def test_jump_probe_needs_targets(jump_data: dict[str, Any]) -> None:
    """Test that a probe run without points, corners or samples is invalid."""
    with pytest.raises(ValidationError, match="probe points"):
        load_config({**jump_data, "probe": {"etas": [0.1]}})


def test_nonradiating_source_needs_disk(source_data: dict[str, Any]) -> None:
    """Test that the bump source is placed on a disk."""
    ellipse = {"type": "ellipse", "center": [0.0, 0.0], "semi_axes": [0.5, 0.3]}
    with pytest.raises(ValidationError, match="on a disk"):
        load_config({**source_data, "shape": ellipse})


def test_config_hash_ignores_budget_and_output(sweep_data: dict[str, Any]) -> None:
    """Test that budgets and output directory do not change the hash, and the seed does."""
    base = load_config(sweep_data).config_hash()

    assert load_config({**sweep_data, "max_cells": 500, "max_solves": 3}).config_hash() == base
    assert load_config({**sweep_data, "output_dir": "elsewhere"}).config_hash() == base
    assert load_config({**sweep_data, "seed": 4}).config_hash() != base
    assert len(base) == 64


@pytest.mark.parametrize(
    ("k_range", "expected"),
    [
        ({"start": 1.0, "stop": 2.0, "step": 0.3}, [1.0, 1.3, 1.6, 1.9]),
        ({"start": 1.0, "stop": 1.99, "step": 0.5}, [1.0, 1.5]),
        ({"start": 1.0, "stop": 8.0, "step": 0.05}, None),
    ],
)
def test_k_range_stops_at_stop(k_range: dict[str, float], expected: list[float] | None) -> None:
    """Test that a step not dividing the range never produces a wavenumber past stop."""
    values = ExperimentConfig.model_validate(
        {"kind": "sweep", "waves": [{"type": "plane", "direction": [1.0, 0.0]}], "k_range": k_range}
    ).k_range
    assert values is not None

    ks = values.values()

    assert ks.max() <= k_range["stop"]
    if expected is None:
        assert len(ks) == 141
        assert ks[-1] == pytest.approx(8.0)
    else:
        assert np.allclose(ks, expected)


def test_solver_budget_fields(sweep_data: dict[str, Any]) -> None:
    """Test the GMRES budget defaults and that the budget is part of the config hash."""
    config = load_config(sweep_data)
    custom = load_config({**sweep_data, "max_iterations": 40000, "restart": 200})

    assert (config.max_iterations, config.restart) == (SOLVER_MAX_ITERATIONS, SOLVER_RESTART)
    assert (custom.max_iterations, custom.restart) == (40000, 200)
    assert custom.config_hash() != config.config_hash()
    with pytest.raises(ValidationError):
        load_config({**sweep_data, "restart": 0})


@pytest.mark.parametrize("path", sorted(CONFIGS_DIR.glob("*.json")), ids=lambda path: path.stem)
def test_shipped_configs_load(path: Path) -> None:
    """Test that every config under configs/ validates."""
    config = load_config(path)

    assert config.levels == sorted(config.levels, reverse=True)


def test_shipped_radial_config_resolves_the_roots() -> None:
    """Test the radial config: two fine levels and a solver budget for the high roots."""
    config = load_config(CONFIGS_DIR / "radial_disk.json")

    assert len(config.levels) >= 2
    assert config.levels[-1] <= 0.005
    assert config.radial.roots_per_order == {0: 3, 1: 2}
    assert config.restart >= 200
    assert config.max_iterations >= 20000
    assert config.subsamples > 1
