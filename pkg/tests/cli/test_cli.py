"""Tests for the scatterlab command line."""

import json
from pathlib import Path
from typing import Any

import pandas as pd
import pytest
from click.testing import CliRunner

from scatterlab.cli import cli
from scatterlab.constants import EXIT_SUCCESS, EXIT_TRUNCATED, EXIT_VALIDATION


@pytest.fixture
def runner() -> CliRunner:
    """Create a click test runner."""
    return CliRunner()


@pytest.fixture
def sweep_file(tmp_path: Path) -> Path:
    """Write a small disk sweep config."""
    data: dict[str, Any] = {
        "kind": "sweep",
        "shape": {"type": "disk", "center": [0.0, 0.0], "radius": 0.5},
        "contrast": {"type": "constant", "n": 2.0},
        "waves": [{"type": "plane", "direction": [1.0, 0.0]}],
        "k_range": {"start": 1.0, "stop": 2.0, "step": 0.5},
        "levels": [0.1, 0.05],
        "far_field_directions": 32,
    }
    path = tmp_path / "sweep.json"
    path.write_text(json.dumps(data))
    return path


def _edit(path: Path, **changes: Any) -> Path:
    data = json.loads(path.read_text()) | changes
    edited = path.with_name(f"edited_{path.name}")
    edited.write_text(json.dumps(data))
    return edited


def test_sweep_command(runner: CliRunner, tmp_path: Path, sweep_file: Path) -> None:
    """Test a complete sweep with a --levels override."""
    out = tmp_path / "out"

    result = runner.invoke(cli, ["sweep", "--config", str(sweep_file), "--out", str(out), "--levels", "0.1"])

    assert result.exit_code == EXIT_SUCCESS, result.output
    assert "EXPERIMENT COMPLETE" in result.output
    assert "Rows: 3 (0 failed)" in result.output
    assert set(pd.read_csv(out / "rows.csv")["level"]) == {0.1}


def test_sweep_command_truncated(runner: CliRunner, tmp_path: Path, sweep_file: Path) -> None:
    """Test exit code 3 when the fine level is over the cell budget."""
    args = ["sweep", "--config", str(sweep_file), "--out", str(tmp_path / "out"), "--max-cells", "300"]

    result = runner.invoke(cli, args)

    assert result.exit_code == EXIT_TRUNCATED
    assert "Truncated:" in result.output


def test_sweep_command_budget_exceeded(runner: CliRunner, tmp_path: Path, sweep_file: Path) -> None:
    """Test exit code 3 when no level fits the cell budget."""
    args = ["sweep", "--config", str(sweep_file), "--out", str(tmp_path / "out"), "--max-cells", "10"]

    result = runner.invoke(cli, args)

    assert result.exit_code == EXIT_TRUNCATED
    assert "Budget exceeded" in result.output


def test_empty_k_range_is_invalid(runner: CliRunner, tmp_path: Path, sweep_file: Path) -> None:
    """Test exit code 2 for an empty k range."""
    config = _edit(sweep_file, k_range={"start": 2.0, "stop": 1.0, "step": 0.5})

    result = runner.invoke(cli, ["sweep", "--config", str(config), "--out", str(tmp_path / "out")])

    assert result.exit_code == EXIT_VALIDATION
    assert "Invalid configuration" in result.output
    assert not (tmp_path / "out").exists()


def test_wrong_command_for_kind(runner: CliRunner, tmp_path: Path, sweep_file: Path) -> None:
    """Test that the probe command refuses a sweep config."""
    result = runner.invoke(cli, ["probe", "--config", str(sweep_file), "--out", str(tmp_path / "out")])

    assert result.exit_code == EXIT_VALIDATION
    assert "describes a sweep experiment" in result.output


def test_missing_out_is_usage_error(runner: CliRunner, sweep_file: Path) -> None:
    """Test that --out is required when the config has no output_dir."""
    result = runner.invoke(cli, ["sweep", "--config", str(sweep_file)])

    assert result.exit_code == EXIT_VALIDATION
    assert "Missing option '--out'" in result.output


def test_bad_levels_option(runner: CliRunner, tmp_path: Path, sweep_file: Path) -> None:
    """Test that non-numeric --levels are rejected."""
    args = ["sweep", "--config", str(sweep_file), "--out", str(tmp_path / "out"), "--levels", "fine,coarse"]

    result = runner.invoke(cli, args)

    assert result.exit_code == EXIT_VALIDATION
    assert "Invalid --levels" in result.output


def test_calibrate_refuses_two_levels(runner: CliRunner, tmp_path: Path, sweep_file: Path) -> None:
    """Test that calibration with two levels fails with exit code 2."""
    result = runner.invoke(cli, ["calibrate", "--config", str(sweep_file), "--out", str(tmp_path / "floor")])

    assert result.exit_code == EXIT_VALIDATION
    assert "Calibration refused" in result.output


def test_floor_from_needs_floor_file(runner: CliRunner, tmp_path: Path, sweep_file: Path) -> None:
    """Test that --floor-from a directory without floor.json is invalid."""
    empty = tmp_path / "empty"
    empty.mkdir()
    args = ["sweep", "--config", str(sweep_file), "--out", str(tmp_path / "out"), "--floor-from", str(empty)]

    result = runner.invoke(cli, args)

    assert result.exit_code == EXIT_VALIDATION
    assert "no floor.json" in result.output


def test_run_and_plots_commands(runner: CliRunner, tmp_path: Path) -> None:
    """Test the generic run command on a stationary-phase config, then plot emission."""
    config = tmp_path / "ladder.json"
    config.write_text(
        json.dumps({"kind": "stationary_phase", "stationary": {"ks": [10.0, 20.0], "densities": 1, "radii": 8}})
    )
    out = tmp_path / "out"

    run = runner.invoke(cli, ["run", "--config", str(config), "--out", str(out), "--seed", "5"])
    plots = runner.invoke(cli, ["plots", str(out)])

    assert run.exit_code == EXIT_SUCCESS, run.output
    assert json.loads((out / "densities.json").read_text())["seed"] == 5
    assert plots.exit_code == EXIT_SUCCESS
    assert "Wrote 2 plot files" in plots.output
    assert (out / "plots" / "plot_ladder.py").is_file()


def test_plots_without_manifest(runner: CliRunner, tmp_path: Path) -> None:
    """Test that plots refuses a directory that holds no run."""
    result = runner.invoke(cli, ["plots", str(tmp_path)])

    assert result.exit_code == EXIT_VALIDATION
    assert "no manifest.json" in result.output


@pytest.mark.parametrize(("model", "field"), [("config", "k_range"), ("manifest", "config_hash")])
def test_schema_command(runner: CliRunner, model: str, field: str) -> None:
    """Test the JSON schema output."""
    result = runner.invoke(cli, ["schema", model])

    assert result.exit_code == EXIT_SUCCESS
    assert field in json.loads(result.output)["properties"]
