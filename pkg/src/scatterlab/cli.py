"""Command line interface for scatterlab."""

from __future__ import annotations

import json
import time
from pathlib import Path
from typing import TYPE_CHECKING, Any, NoReturn

import click
from pydantic import ValidationError

from scatterlab.constants import EXIT_SUCCESS, EXIT_TRUNCATED, EXIT_VALIDATION, WORKERS_ENV_VAR
from scatterlab.lab.calibrate import CalibrationError, calibrate_floor, load_floor
from scatterlab.lab.config import ConfigError, ExperimentConfig, load_config, read_config_data
from scatterlab.lab.manifest import Manifest, ManifestError
from scatterlab.lab.plots import emit_plots
from scatterlab.lab.runner import BudgetExceededError, planned_tasks, run_experiment

if TYPE_CHECKING:
    from collections.abc import Callable

    from scatterlab.lab.runner import RunResult


@click.group()
def cli() -> None:
    """scatterlab - Numerical experiments on scattering by penetrable inhomogeneities."""


def _experiment_options(command: Callable[..., Any]) -> Callable[..., Any]:
    options = [
        click.option(
            "--config",
            "config_path",
            type=click.Path(exists=True, path_type=Path),
            required=True,
            help="Path to the JSON experiment config",
        ),
        click.option("--out", "out_dir", type=click.Path(path_type=Path), help="Result directory"),
        click.option("--levels", type=str, help="Comma-separated grid spacings, e.g. 0.04,0.02"),
        click.option("--seed", type=int, help="Random seed"),
        click.option("--max-cells", type=click.IntRange(min=1), help="Largest grid allowed, in cells"),
        click.option(
            "--workers",
            type=click.IntRange(min=1),
            default=1,
            envvar=WORKERS_ENV_VAR,
            show_envvar=True,
            help="Worker threads for independent solves",
        ),
    ]
    for option in reversed(options):
        command = option(command)
    return command


def _fail(message: str, code: int = EXIT_VALIDATION) -> NoReturn:
    click.secho(message, fg="red", err=True)
    raise SystemExit(code)


def _parse_levels(levels: str) -> list[float]:
    try:
        return [float(level) for level in levels.split(",") if level.strip()]
    except ValueError as e:
        msg = f"Invalid --levels {levels!r}: expected comma-separated numbers"
        raise click.BadParameter(msg) from e


def _load(
    config_path: Path,
    out_dir: Path | None,
    levels: str | None,
    seed: int | None,
    max_cells: int | None,
    *,
    kinds: tuple[str, ...] | None = None,
    floor_from: Path | None = None,
) -> ExperimentConfig:
    """Merge CLI options over the config file, CLI taking priority, and validate."""
    try:
        data = read_config_data(config_path)
        if out_dir is not None:
            data["output_dir"] = str(out_dir)
        if levels is not None:
            data["levels"] = _parse_levels(levels)
        if seed is not None:
            data["seed"] = seed
        if max_cells is not None:
            data["max_cells"] = max_cells
        if floor_from is not None:
            data["floor"] = load_floor(floor_from)
        config = load_config(data)
    except (ConfigError, CalibrationError) as e:
        _fail(f"Invalid configuration: {e}")
    except ValidationError as e:
        _fail(f"Invalid configuration {config_path.name}:\n{e}")
    if kinds is not None and config.kind not in kinds:
        _fail(f"{config_path.name} describes a {config.kind} experiment; this command runs {' or '.join(kinds)}")
    if config.output_dir is None:
        msg = "Missing option '--out' (provide via CLI or config file)"
        raise click.UsageError(msg)
    click.secho(f"Loaded {config.kind} config {config_path.name} (hash {config.config_hash()[:12]})", fg="blue")
    return config


def _run(config: ExperimentConfig, workers: int) -> None:
    start_time = time.time()
    try:
        with click.progressbar(length=planned_tasks(config), label=f"Running {config.kind}") as bar:
            result = run_experiment(config, workers=workers, progress_callback=bar.update)
    except ConfigError as e:
        _fail(str(e))
    except BudgetExceededError as e:
        _fail(f"Budget exceeded before any result: {e}", EXIT_TRUNCATED)
    _display_run_results(result, start_time)
    if result.exit_code != EXIT_SUCCESS:
        raise SystemExit(result.exit_code)


def _summary_lines(summary: dict[str, Any], indent: str = "  ") -> list[str]:
    lines = []
    for key, value in summary.items():
        if isinstance(value, dict):
            lines.append(f"{indent}{key}:")
            lines.extend(_summary_lines(value, indent + "  "))
        elif isinstance(value, list) and value and isinstance(value[0], dict):
            lines.append(f"{indent}{key}: {len(value)} entries")
        elif isinstance(value, float):
            lines.append(f"{indent}{key}: {value:.6g}")
        else:
            lines.append(f"{indent}{key}: {value}")
    return lines


def _display_run_results(result: RunResult, start_time: float) -> None:
    """Display the run summary, warnings and timings."""
    manifest: Manifest = result.manifest
    total_time = time.time() - start_time

    click.echo()
    click.secho("=" * 60, fg="green")
    click.secho("EXPERIMENT COMPLETE", fg="green", bold=True)
    click.secho("=" * 60, fg="green")

    click.secho(f"Experiment: {manifest.kind}", fg="cyan")
    click.secho(f"Rows: {manifest.rows:,} ({manifest.failed_rows:,} failed)", fg="cyan")
    for line in _summary_lines(manifest.summary):
        click.secho(line, fg="cyan")

    for warning in manifest.warnings:
        click.secho(f"Warning: {warning}", fg="yellow")
    if manifest.truncated:
        click.secho(f"Truncated: {manifest.truncation_reason}", fg="yellow", bold=True)

    click.echo()
    click.secho("Performance Metrics:", fg="magenta", bold=True)
    click.secho(f"  • Total time: {total_time:.2f}s", fg="yellow")
    for name, seconds in manifest.timings.items():
        click.secho(f"  • {name}: {seconds:.2f}s", fg="yellow")
    click.secho(f"Results in: {result.out_dir}", fg="green", bold=True)


@cli.command()
@_experiment_options
@click.option(
    "--floor-from",
    type=click.Path(exists=True, file_okay=False, path_type=Path),
    help="Calibration result directory whose floor.json sets the scattering floor",
)
def sweep(
    config_path: Path,
    out_dir: Path | None,
    levels: str | None,
    seed: int | None,
    max_cells: int | None,
    workers: int,
    floor_from: Path | None,
) -> None:
    """Sweep k and record the scattering strength of each incident wave."""
    config = _load(
        config_path, out_dir, levels, seed, max_cells, kinds=("sweep", "corner_scatter"), floor_from=floor_from
    )
    _run(config, workers)


@cli.command()
@_experiment_options
def probe(
    config_path: Path,
    out_dir: Path | None,
    levels: str | None,
    seed: int | None,
    max_cells: int | None,
    workers: int,
) -> None:
    """Measure symmetric second-derivative jumps of the volume potential at boundary points."""
    config = _load(config_path, out_dir, levels, seed, max_cells, kinds=("jump_probe",))
    _run(config, workers)


@cli.command()
@_experiment_options
def radial(
    config_path: Path,
    out_dir: Path | None,
    levels: str | None,
    seed: int | None,
    max_cells: int | None,
    workers: int,
) -> None:
    """Find transmission eigenvalues of a radial medium and test their eigen-incident waves."""
    config = _load(config_path, out_dir, levels, seed, max_cells, kinds=("radial_nonscatter",))
    _run(config, workers)


@cli.command()
@_experiment_options
@click.option(
    "--floor-from",
    type=click.Path(exists=True, file_okay=False, path_type=Path),
    help="Calibration result directory whose floor.json sets the scattering floor",
)
def run(
    config_path: Path,
    out_dir: Path | None,
    levels: str | None,
    seed: int | None,
    max_cells: int | None,
    workers: int,
    floor_from: Path | None,
) -> None:
    """Run an experiment of any kind."""
    config = _load(config_path, out_dir, levels, seed, max_cells, floor_from=floor_from)
    _run(config, workers)


@cli.command()
@_experiment_options
def calibrate(
    config_path: Path,
    out_dir: Path | None,
    levels: str | None,
    seed: int | None,
    max_cells: int | None,
    workers: int,
) -> None:
    """Calibrate the scattering floor from a corner sweep over at least three grid levels."""
    config = _load(config_path, out_dir, levels, seed, max_cells, kinds=("sweep", "corner_scatter"))
    start_time = time.time()
    try:
        with click.progressbar(length=planned_tasks(config), label="Calibrating") as bar:
            calibration = calibrate_floor(config, workers=workers, progress_callback=bar.update)
    except (CalibrationError, ConfigError) as e:
        _fail(f"Calibration refused: {e}")
    except BudgetExceededError as e:
        _fail(f"Budget exceeded before any result: {e}", EXIT_TRUNCATED)

    click.echo()
    click.secho("=" * 60, fg="green")
    click.secho("CALIBRATION COMPLETE", fg="green", bold=True)
    click.secho("=" * 60, fg="green")
    for level, value in zip(calibration.levels, calibration.min_rho, strict=True):
        click.secho(f"  h={level:g}: min rho = {value:.6g}", fg="cyan")
    if calibration.calibrated:
        click.secho(f"Extrapolated min rho: {calibration.extrapolated:.6g} (order {calibration.order:.2f})", fg="cyan")
    else:
        click.secho(f"Warning: {calibration.warning}", fg="yellow")
    click.secho(f"Scattering floor: {calibration.floor:.6g}", fg="green", bold=True)
    click.secho(f"Total time: {time.time() - start_time:.2f}s", fg="yellow")


@cli.command()
@click.argument("result_dir", type=click.Path(exists=True, file_okay=False, path_type=Path))
def plots(result_dir: Path) -> None:
    """Write plot data and plot scripts for a result directory."""
    try:
        files = emit_plots(result_dir)
    except ManifestError as e:
        _fail(str(e))
    for path in files:
        click.echo(f"  {path.relative_to(result_dir).as_posix()}")
    click.secho(f"Wrote {len(files)} plot files", fg="green", bold=True)


@cli.command()
@click.argument("model", type=click.Choice(["config", "manifest"]))
def schema(model: str) -> None:
    """Print the JSON schema of experiment configs or manifests."""
    target = ExperimentConfig if model == "config" else Manifest
    click.echo(json.dumps(target.model_json_schema(), indent=2))


if __name__ == "__main__":
    cli()
