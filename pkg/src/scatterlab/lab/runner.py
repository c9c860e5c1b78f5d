"""Batch experiments written to a result directory.

Each experiment kind produces `rows.csv` (one status-bearing row per unit of work) plus
kind-specific tables, a `config.json` echo and a `manifest.json`. Units of work run on a
thread pool; their rows are written only from the orchestration thread.
"""

from __future__ import annotations

import json
import math
import time
from collections.abc import Callable
from concurrent.futures import ThreadPoolExecutor, as_completed
from contextlib import contextmanager
from dataclasses import dataclass, field
from datetime import UTC, datetime
from functools import partial
from pathlib import Path
from typing import TYPE_CHECKING, Any, NamedTuple

import numpy as np
import pandas as pd

from scatterlab.constants import (
    APPENDIX_SAMPLES,
    EXIT_SOLVER_FAILURE,
    EXIT_SUCCESS,
    EXIT_TRUNCATED,
    GRID_MARGIN_CELLS,
    RADIAL_DIP_FACTOR,
    RADIAL_RHO_THRESHOLD,
    SOURCE_SUPPRESSION_FACTOR,
)
from scatterlab.geometry import Contrast, Grid, GridError, rasterize
from scatterlab.jumps import ProbeError, appendix_inequality_check, jump_integral_bound_check, symmetric_jump_probe
from scatterlab.lab.config import ConfigError, ExperimentConfig
from scatterlab.lab.manifest import Manifest, collect_files, library_versions, write_manifest
from scatterlab.lab.writer import ResultWriter, write_table
from scatterlab.lippmann import (
    ConvergenceError,
    ConvolutionOperator,
    ResolutionError,
    check_resolution,
    far_field,
    scattering_strength,
    solve_scattering,
    solve_source_problem,
)
from scatterlab.radial import (
    RadialMedium,
    SpectrumError,
    dirichlet_wavenumbers,
    eigen_incident,
    te_determinant,
    te_spectrum,
)
from scatterlab.shapes import Ball, Disk, Polygon, create_shape_from_data
from scatterlab.volpot import DensityField
from scatterlab.waves import FourierDensity, stationary_phase_ladder

if TYPE_CHECKING:
    from collections.abc import Iterator

    from scatterlab.geometry import MediumField
    from scatterlab.shapes import Shape
    from scatterlab.waves import IncidentWave

ROWS_NAME = "rows.csv"
CONFIG_ECHO_NAME = "config.json"
STATUS_OK = "ok"
PROBE_NORMAL_SAMPLES = 4096
SOURCE_NAMES = ("bump", "indicator", "corner")

Task = Callable[[], dict[str, list[dict[str, Any]]]]


class BudgetExceededError(RuntimeError):
    """Raised when the cell or solve budget leaves no work to do."""


class RunResult(NamedTuple):
    out_dir: Path
    manifest: Manifest
    rows: pd.DataFrame

    @property
    def exit_code(self) -> int:
        if self.manifest.rows and self.manifest.failed_rows == self.manifest.rows:
            return EXIT_SOLVER_FAILURE
        if self.manifest.truncated:
            return EXIT_TRUNCATED
        return EXIT_SUCCESS


@dataclass
class _Run:
    config: ExperimentConfig
    out_dir: Path
    workers: int
    progress_callback: Callable[[int], None] | None = None
    solves: int = 0
    truncation: str | None = None
    warnings: list[str] = field(default_factory=list)
    timings: dict[str, float] = field(default_factory=dict)

    @property
    def fft_workers(self) -> int:
        # One FFT thread per task once tasks run in parallel
        return -1 if self.workers <= 1 else 1

    def warn(self, message: str) -> None:
        self.warnings.append(message)

    def truncate(self, reason: str) -> None:
        if self.truncation is None:
            self.truncation = reason

    def grid(self, shape: Shape, spacing: float, margin_cells: int = GRID_MARGIN_CELLS) -> Grid | None:
        try:
            return Grid.around(shape, spacing, max_cells=self.config.max_cells, margin_cells=margin_cells)
        except GridError as e:
            self.truncate(str(e))
            return None

    def reserve(self, solves: int) -> bool:
        limit = self.config.max_solves
        if limit is not None and self.solves + solves > limit:
            self.truncate(f"solve budget of {limit} reached")
            return False
        self.solves += solves
        return True

    def writer(self, name: str, columns: list[str], keys: list[str]) -> ResultWriter:
        return ResultWriter(self.out_dir / name, columns, keys)

    @contextmanager
    def timer(self, name: str) -> Iterator[None]:
        start = time.perf_counter()
        try:
            yield
        finally:
            self.timings[name] = self.timings.get(name, 0.0) + time.perf_counter() - start

    def dispatch(self, tasks: list[Task], writers: dict[str, ResultWriter]) -> None:
        """Run tasks on the worker pool and hand each result to its writer."""

        def collect(result: dict[str, list[dict[str, Any]]]) -> None:
            for name, rows in result.items():
                writers[name].add(rows)
            if self.progress_callback:
                self.progress_callback(1)

        if self.workers <= 1:
            for task in tasks:
                collect(task())
            return
        with ThreadPoolExecutor(max_workers=self.workers) as pool:
            futures = [pool.submit(task) for task in tasks]
            for future in as_completed(futures):
                collect(future.result())


def _scatter_outcome(
    medium: MediumField,
    wave: IncidentWave,
    k: float,
    run: _Run,
    operator: ConvolutionOperator | None = None,
) -> dict[str, Any]:
    failed = {"rho": math.nan, "iterations": 0, "residual": math.nan}
    config = run.config
    try:
        solution = solve_scattering(
            medium,
            wave,
            k,
            tol=config.tolerance,
            max_iterations=config.max_iterations,
            restart=config.restart,
            operator=operator,
        )
    except ResolutionError:
        return {**failed, "status": "unresolved"}
    except ConvergenceError as e:
        residual = e.history[-1] if e.history else math.nan
        return {**failed, "iterations": len(e.history), "residual": residual, "status": "not_converged"}
    except ValueError:
        return {**failed, "status": "failed"}
    pattern = far_field(solution, config.far_field_directions)
    return {
        "rho": scattering_strength(solution, pattern),
        "iterations": solution.iterations,
        "residual": solution.relative_residual,
        "status": STATUS_OK,
    }


# Sweeps


SWEEP_COLUMNS = ["level", "k", "wave", "rho", "iterations", "residual", "status", "dirichlet"]


def _near_dirichlet(shape: Shape, ks: np.ndarray, step: float) -> np.ndarray:
    """Flag wavenumbers within half a step of a Dirichlet wavenumber; all False if unknown."""
    try:
        wavenumbers = dirichlet_wavenumbers(shape, float(ks[-1]) + step)
    except SpectrumError:
        return np.zeros(len(ks), dtype=bool)
    if len(wavenumbers) == 0:
        return np.zeros(len(ks), dtype=bool)
    return np.abs(ks[:, np.newaxis] - wavenumbers[np.newaxis, :]).min(axis=1) <= step / 2


def _sweep_task(
    medium: MediumField,
    k: float,
    waves: list[tuple[str, IncidentWave]],
    dirichlet: bool,  # noqa: FBT001
    run: _Run,
) -> dict[str, list[dict[str, Any]]]:
    try:
        check_resolution(medium, k)
    except ResolutionError:
        operator = None
    else:
        operator = ConvolutionOperator(medium.grid, k, workers=run.fft_workers)
    rows = [
        {"level": medium.grid.spacing, "k": k, "wave": label, **_scatter_outcome(medium, wave, k, run, operator)}
        | {"dirichlet": dirichlet}
        for label, wave in waves
    ]
    return {ROWS_NAME: rows}


def _sweep_summary(frame: pd.DataFrame, config: ExperimentConfig) -> dict[str, Any]:
    ok = frame[frame["status"] == STATUS_OK]
    levels: dict[str, Any] = {}
    for level, group in ok.groupby("level", sort=True):
        best = group.loc[group["rho"].idxmin()]
        entry: dict[str, Any] = {
            "min_rho": float(best["rho"]),
            "k_at_min": float(best["k"]),
            "wave_at_min": str(best["wave"]),
            "min_rho_per_wave": {str(wave): float(g["rho"].min()) for wave, g in group.groupby("wave")},
            "dirichlet_rows": int(group["dirichlet"].astype(bool).sum()),
        }
        if config.floor is not None:
            entry["above_floor"] = bool(best["rho"] > config.floor)
        levels[f"{level:g}"] = entry
    return {"levels": levels, "floor": config.floor}


def _run_sweep(run: _Run) -> tuple[pd.DataFrame, dict[str, Any]]:
    config = run.config
    if config.k_range is None:
        msg = f"{config.kind} experiments need a k_range"
        raise ConfigError(msg)
    shape = config.build_shape()
    contrast = config.build_contrast()
    ks = config.k_range.values()
    labels = config.wave_labels()
    dirichlet = _near_dirichlet(shape, ks, config.k_range.step)
    writer = run.writer(ROWS_NAME, SWEEP_COLUMNS, ["level", "k", "wave"])
    if config.kind == "corner_scatter" and config.floor is None:
        run.warn("no calibrated floor in the config; run `scatterlab calibrate` to compare against one")

    tasks: list[Task] = []
    with run.timer("setup"):
        for level in config.levels:
            grid = run.grid(shape, level)
            if grid is None:
                continue
            medium = rasterize(shape, contrast, grid, subsamples=config.subsamples)
            for k, near in zip(ks, dirichlet, strict=True):
                pending = [
                    (label, wave)
                    for label, wave in zip(labels, config.build_waves(float(k)), strict=True)
                    if not writer.is_done(level=level, k=float(k), wave=label)
                ]
                if not pending:
                    continue
                if not run.reserve(len(pending)):
                    break
                tasks.append(partial(_sweep_task, medium, float(k), pending, bool(near), run))
    with run.timer("solve"):
        run.dispatch(tasks, {ROWS_NAME: writer})
    frame = writer.finalize()
    return frame, _sweep_summary(frame, config)


# Radial non-scattering


RADIAL_COLUMNS = ["level", "order", "root", "k_root", "offset", "k", "rho", "iterations", "residual", "status"]


def radial_medium_of(config: ExperimentConfig) -> RadialMedium:
    shape = config.build_shape()
    contrast = config.build_contrast()
    if not isinstance(shape, Disk | Ball) or not contrast.is_constant:
        msg = "radial experiments need a disk or ball with constant contrast"
        raise ConfigError(msg)
    return RadialMedium(dimension=shape.dimension, radius=shape.radius, index=contrast.coefficients[0])


def _radial_task(
    medium: MediumField,
    radial: RadialMedium,
    order: int,
    root: int,
    k_root: float,
    offsets: list[float],
    run: _Run,
) -> dict[str, list[dict[str, Any]]]:
    base = eigen_incident(radial, order, k_root)
    rows = []
    for offset in offsets:
        k = k_root + offset
        rows.append(
            {
                "level": medium.grid.spacing,
                "order": order,
                "root": root,
                "k_root": k_root,
                "offset": offset,
                "k": k,
                **_scatter_outcome(medium, base.with_wavenumber(k), k, run),
            }
        )
    return {ROWS_NAME: rows}


def _radial_summary(frame: pd.DataFrame) -> dict[str, Any]:
    """Per-root verdicts at every level, judged overall at the finest level that has rows."""
    ok = frame[frame["status"] == STATUS_OK]
    roots = []
    for (level, order, root), group in ok.groupby(["level", "order", "root"], sort=True):
        at_root = group.loc[group["offset"] == 0, "rho"]
        around = group.loc[group["offset"] != 0, "rho"]
        if at_root.empty or around.empty:
            continue
        rho_root = float(at_root.iloc[0])
        dip = float(around.min()) / rho_root if rho_root > 0 else None
        roots.append(
            {
                "level": float(level),
                "order": int(order),
                "root": int(root),
                "k_root": float(group["k_root"].iloc[0]),
                "rho_root": rho_root,
                "rho_neighbour_min": float(around.min()),
                "dip_ratio": dip,
                "nonscattering": rho_root <= RADIAL_RHO_THRESHOLD and (dip is None or dip >= RADIAL_DIP_FACTOR),
            }
        )
    finest_level = min((entry["level"] for entry in roots), default=None)
    finest = [entry for entry in roots if entry["level"] == finest_level]
    return {
        "roots": roots,
        "finest_level": finest_level,
        "all_nonscattering": bool(finest) and all(entry["nonscattering"] for entry in finest),
        "neighbour_change": _neighbour_change(ok),
    }


def _neighbour_change(ok: pd.DataFrame) -> float | None:
    """Largest relative change of the off-root ρ between the two finest levels."""
    levels = sorted(ok["level"].unique())
    if len(levels) < 2:  # noqa: PLR2004
        return None
    keys = ["order", "root", "offset"]
    fine, coarse = (ok[(ok["level"] == level) & (ok["offset"] != 0)].set_index(keys)["rho"] for level in levels[:2])
    change = ((fine - coarse).abs() / coarse).dropna()
    return float(change.max()) if not change.empty else None


def _run_radial(run: _Run) -> tuple[pd.DataFrame, dict[str, Any]]:
    config = run.config
    settings = config.radial
    radial = radial_medium_of(config)
    with run.timer("spectrum"):
        spectrum = te_spectrum(radial, settings.max_order, settings.k_min, settings.k_max)
        write_table(run.out_dir / "spectrum.csv", spectrum.to_frame())
        (run.out_dir / "spectrum.json").write_text(json.dumps(spectrum.to_data(), indent=2) + "\n")
        samples = np.linspace(settings.k_min, settings.k_max, settings.determinant_samples)
        determinant = pd.DataFrame({"k": samples})
        for order in range(settings.max_order + 1):
            determinant[f"d{order}"] = te_determinant(radial, order, samples)
        write_table(run.out_dir / "determinant.csv", determinant)

    selected: list[tuple[int, int, float]] = []
    for order, count in sorted(settings.roots_per_order.items()):
        roots = spectrum.of_order(order)[:count]
        if len(roots) < count:
            window = f"[{settings.k_min}, {settings.k_max}]"
            run.warn(f"order {order}: {len(roots)} of {count} requested roots lie in {window}")
        selected.extend((order, index, k_root) for index, k_root in enumerate(roots))
    if radial.dimension != 2 and selected:  # noqa: PLR2004
        run.warn("eigen Herglotz incidence is built for disks only; scattering rows skipped")
        selected = []

    shape = radial.shape()
    contrast = radial.contrast()
    writer = run.writer(ROWS_NAME, RADIAL_COLUMNS, ["level", "order", "root", "offset"])
    tasks: list[Task] = []
    with run.timer("setup"):
        for level in config.levels:
            grid = run.grid(shape, level)
            if grid is None:
                continue
            medium = rasterize(shape, contrast, grid, subsamples=config.subsamples)
            for order, index, k_root in selected:
                pending = [
                    offset
                    for offset in (-settings.offset, 0.0, settings.offset)
                    if k_root + offset > 0 and not writer.is_done(level=level, order=order, root=index, offset=offset)
                ]
                if not pending:
                    continue
                if not run.reserve(len(pending)):
                    break
                tasks.append(partial(_radial_task, medium, radial, order, index, k_root, pending, run))
    with run.timer("solve"):
        run.dispatch(tasks, {ROWS_NAME: writer})
    frame = writer.finalize()
    summary = _radial_summary(frame)
    summary["spectrum"] = spectrum.to_data()["roots"]
    return frame, summary


# Jump probes


JUMP_COLUMNS = ["point", "eta", "spacing", "i", "j", "re", "im"]
INTEGRAL_COLUMNS = ["graph", "eta", "tangential", "normal", "comparison", "ratio"]


def probe_targets(shape: Shape, config: ExperimentConfig) -> list[tuple[str, np.ndarray, np.ndarray]]:
    """Boundary points with inward probe directions: explicit points, polygon corners, then a boundary sample."""
    settings = config.probe
    targets: list[tuple[str, np.ndarray, np.ndarray]] = []
    if settings.points:
        sample = shape.boundary_sample(PROBE_NORMAL_SAMPLES)
        for point in settings.points:
            x0 = np.asarray(point, dtype=float)
            if x0.shape != (shape.dimension,):
                msg = f"probe point {point} is not a {shape.dimension}D point"
                raise ConfigError(msg)
            nearest = int(np.argmin(np.linalg.norm(sample.points - x0, axis=1)))
            targets.append(("point", x0, -sample.normals[nearest]))
    if settings.corners:
        if not isinstance(shape, Polygon):
            msg = f"corner probes need a polygon, not a {shape.type}"
            raise ConfigError(msg)
        sample = shape.boundary_sample(2 * len(shape.vertices))
        targets.extend(
            ("corner", point, -normal)
            for point, normal in zip(sample.points[sample.corners], sample.normals[sample.corners], strict=True)
        )
    if settings.boundary_count:
        sample = shape.boundary_sample(settings.boundary_count)
        smooth = ~sample.corners
        targets.extend(
            ("boundary", point, -normal)
            for point, normal in zip(sample.points[smooth], sample.normals[smooth], strict=True)
        )
    return targets


def _point_columns(dimension: int) -> list[str]:
    return [
        "point",
        "kind",
        *(f"x{i}" for i in range(dimension)),
        *(f"e{i}" for i in range(dimension)),
        "sup_jump",
        "divergent",
        "truncated_etas",
        "status",
    ]


def _probe_task(
    density: DensityField,
    index: int,
    kind: str,
    point: np.ndarray,
    direction: np.ndarray,
    run: _Run,
) -> dict[str, list[dict[str, Any]]]:
    coordinates = {f"x{i}": float(v) for i, v in enumerate(point)}
    unit = direction / np.linalg.norm(direction)
    coordinates |= {f"e{i}": float(v) for i, v in enumerate(unit)}
    try:
        report = symmetric_jump_probe(density, point, direction, run.config.probe.etas, max_cells=run.config.max_cells)
    except ProbeError:
        failed = {"sup_jump": math.nan, "divergent": False, "truncated_etas": 0, "status": "failed"}
        return {ROWS_NAME: [{"point": index, "kind": kind, **coordinates, **failed}], "jumps.csv": []}
    dimension = len(point)
    jumps = [
        {
            "point": index,
            "eta": float(eta),
            "spacing": float(spacing),
            "i": i,
            "j": j,
            "re": float(jump[i, j].real),
            "im": float(jump[i, j].imag),
        }
        for eta, spacing, jump in zip(report.etas, report.spacings, report.jumps, strict=True)
        for i in range(dimension)
        for j in range(i, dimension)
    ]
    row = {
        "point": index,
        "kind": kind,
        **coordinates,
        "sup_jump": report.sup_jump,
        "divergent": report.divergent,
        "truncated_etas": len(report.truncated_etas),
        "status": STATUS_OK,
    }
    return {ROWS_NAME: [row], "jumps.csv": jumps}


def _graph_samples(dimension: int) -> dict[str, tuple[np.ndarray, np.ndarray]]:
    """A flat boundary and a right-angle corner, as graphs with Lipschitz constant 1."""
    if dimension == 2:  # noqa: PLR2004
        return {
            "flat": (np.array([-1.0, 1.0]), np.array([0.0, 0.0])),
            "corner": (np.array([-1.0, 0.0, 1.0]), np.array([1.0, 0.0, 1.0])),
        }
    return {
        "flat": (np.array([0.0, 1.0]), np.array([0.0, 0.0])),
        "corner": (np.array([0.0, 1.0]), np.array([0.0, 1.0])),
    }


def _jump_integral_rows(run: _Run, dimension: int) -> tuple[pd.DataFrame, dict[str, Any]]:
    rows = []
    summary = {}
    for name, (nodes, values) in _graph_samples(dimension).items():
        report = jump_integral_bound_check(nodes, values, run.config.probe.etas, lipschitz=1.0, dim=dimension)
        rows.extend(
            {"graph": name, "eta": float(eta), "tangential": t, "normal": n, "comparison": c, "ratio": r}
            for eta, t, n, c, r in zip(
                report.etas, report.tangential, report.normal, report.comparison, report.ratios, strict=True
            )
        )
        summary[name] = {"max_ratio": float(report.ratios.max()), "growing": report.growing}
    return pd.DataFrame(rows, columns=INTEGRAL_COLUMNS), summary


def _inequality_summary(seed: int) -> dict[str, float]:
    rng = np.random.default_rng(seed)
    a = rng.uniform(-10, 10, APPENDIX_SAMPLES)
    b = rng.uniform(-10, 10, APPENDIX_SAMPLES)
    b_equal = rng.uniform(-10, 10, 1000)
    equality = appendix_inequality_check(1 / np.sqrt(b_equal**2 + 3), b_equal)
    return {
        "min_gap": float(appendix_inequality_check(a, b).gap.min()),
        "max_equality_error": float(np.abs(equality.gap).max()),
    }


def _run_jump_probe(run: _Run) -> tuple[pd.DataFrame, dict[str, Any]]:
    config = run.config
    shape = config.build_shape()
    targets = probe_targets(shape, config)
    spacing = config.levels[-1]
    margin = GRID_MARGIN_CELLS + math.ceil(max(config.probe.etas) / spacing) + 1
    points = run.writer(ROWS_NAME, _point_columns(shape.dimension), ["point"])
    jumps = run.writer("jumps.csv", JUMP_COLUMNS, ["point", "eta", "i", "j"])

    tasks: list[Task] = []
    with run.timer("setup"):
        grid = run.grid(shape, spacing, margin_cells=margin)
        if grid is not None:
            medium = rasterize(shape, config.build_contrast(), grid)
            density = DensityField.constant(medium, config.probe.density)
            tasks = [
                partial(_probe_task, density, index, kind, point, direction, run)
                for index, (kind, point, direction) in enumerate(targets)
                if not points.is_done(point=index)
            ]
    with run.timer("probe"):
        run.dispatch(tasks, {ROWS_NAME: points, "jumps.csv": jumps})
    frame = points.finalize()
    jumps.finalize()
    truncated = int(frame["truncated_etas"].sum()) if not frame.empty else 0
    if truncated:
        run.truncate(f"{truncated} probe offsets exceeded the cell budget")

    with run.timer("integrals"):
        integrals, integral_summary = _jump_integral_rows(run, shape.dimension)
        write_table(run.out_dir / "integrals.csv", integrals)
        inequality = _inequality_summary(config.seed)
    ok = frame[frame["status"] == STATUS_OK]
    summary = {
        "points": len(frame),
        "divergent_points": [int(p) for p in ok.loc[ok["divergent"].astype(bool), "point"]],
        "max_sup_jump": float(ok["sup_jump"].max()) if not ok.empty else None,
        "integrals": integral_summary,
        "inequality": inequality,
    }
    return frame, summary


# Non-radiating sources


SOURCE_COLUMNS = ["level", "source", "source_norm", "far_norm", "ratio", "status"]


def quartic_bump_source(
    center: np.ndarray, radius: float, k: float, dimension: int = 2
) -> Callable[[np.ndarray], np.ndarray]:
    """f = Δv + k²v for the bump v(x) = (1 - |x - c|²/R²)⁴, zero outside the ball.

    The radiating solution of Δu + k²u = f is v itself, so f has no far field.
    """

    def source(points: np.ndarray) -> np.ndarray:
        s = np.sum((points - center) ** 2, axis=1) / radius**2
        t = np.clip(1 - s, 0, None)
        laplacian = (-8 * dimension * t**3 + 48 * s * t**2) / radius**2
        return laplacian + k**2 * t**4

    return source


def _l2_norm(density: DensityField) -> float:
    return math.sqrt(float(np.sum(np.abs(density.values) ** 2)) * density.grid.cell_volume)


def _scaled_indicator(medium: MediumField, norm: float) -> DensityField:
    measure = int(medium.inside.sum()) * medium.grid.cell_volume
    return DensityField.constant(medium, norm / math.sqrt(measure))


def _source_task(
    disk: Disk,
    disk_grid: Grid,
    corner_shape: Shape,
    corner_grid: Grid | None,
    names: list[str],
    run: _Run,
) -> dict[str, list[dict[str, Any]]]:
    k = run.config.source.k
    unit = Contrast.constant(1.0)
    disk_medium = rasterize(disk, unit, disk_grid)
    bump = DensityField.from_function(disk_medium, quartic_bump_source(disk.reference_point(), disk.radius, k))
    norm = _l2_norm(bump)
    densities = {"bump": bump, "indicator": _scaled_indicator(disk_medium, norm)}
    if corner_grid is not None:
        densities["corner"] = _scaled_indicator(rasterize(corner_shape, unit, corner_grid), norm)

    rows = []
    for name in names:
        density = densities[name]
        try:
            operator = ConvolutionOperator(density.grid, k, workers=run.fft_workers)
            solution = solve_source_problem(density, k, count=run.config.far_field_directions, operator=operator)
        except ValueError:
            rows.append({"level": disk_grid.spacing, "source": name, "status": "failed"})
            continue
        far_norm = solution.pattern.l2_norm
        source_norm = _l2_norm(density)
        rows.append(
            {
                "level": disk_grid.spacing,
                "source": name,
                "source_norm": source_norm,
                "far_norm": far_norm,
                "ratio": far_norm / source_norm if source_norm > 0 else math.nan,
                "status": STATUS_OK,
            }
        )
    return {ROWS_NAME: rows}


def _source_summary(frame: pd.DataFrame, config: ExperimentConfig) -> dict[str, Any]:
    ok = frame[frame["status"] == STATUS_OK]
    far = ok.pivot_table(index="level", columns="source", values="far_norm").sort_index(ascending=False)
    levels = {}
    for level, row in far.iterrows():
        entry: dict[str, Any] = {name: float(row[name]) for name in SOURCE_NAMES if name in row and pd.notna(row[name])}
        if "bump" in entry and "indicator" in entry and entry["bump"] > 0:
            suppression = entry["indicator"] / entry["bump"]
            entry["suppression"] = suppression
            entry["nonradiating"] = suppression >= SOURCE_SUPPRESSION_FACTOR
        if config.floor is not None and "corner" in entry:
            entry["corner_above_floor"] = entry["corner"] > config.floor
        levels[f"{level:g}"] = entry
    bump = far["bump"].dropna().to_numpy() if "bump" in far else np.array([])
    return {
        "k": config.source.k,
        "levels": levels,
        "bump_decreasing": bool(len(bump) >= 2 and np.all(np.diff(bump) < 0)),  # noqa: PLR2004
        "floor": config.floor,
    }


def _run_sources(run: _Run) -> tuple[pd.DataFrame, dict[str, Any]]:
    config = run.config
    disk = config.build_shape()
    if not isinstance(disk, Disk):
        msg = "nonradiating_source places its bump on a disk"
        raise ConfigError(msg)
    corner_shape = create_shape_from_data(config.source.corner_shape)
    writer = run.writer(ROWS_NAME, SOURCE_COLUMNS, ["level", "source"])
    tasks: list[Task] = []
    with run.timer("setup"):
        for level in config.levels:
            names = [name for name in SOURCE_NAMES if not writer.is_done(level=level, source=name)]
            if not names:
                continue
            disk_grid = run.grid(disk, level)
            corner_grid = run.grid(corner_shape, level) if "corner" in names else None
            if disk_grid is None:
                continue
            if corner_grid is None:
                names = [name for name in names if name != "corner"]
            if not run.reserve(len(names)):
                break
            tasks.append(partial(_source_task, disk, disk_grid, corner_shape, corner_grid, names, run))
    with run.timer("solve"):
        run.dispatch(tasks, {ROWS_NAME: writer})
    frame = writer.finalize()
    return frame, _source_summary(frame, config)


# Stationary phase


STATIONARY_COLUMNS = ["density", "k", "sup_residual", "scaled_residual", "status"]


def stationary_points(radii: int, angles: int) -> np.ndarray:
    """Sample points z with |z| in [1, 2] along a few rays."""
    radius, angle = np.meshgrid(np.linspace(1.0, 2.0, radii), 2 * np.pi * np.arange(angles) / angles)
    return np.column_stack([(radius * np.cos(angle)).ravel(), (radius * np.sin(angle)).ravel()])


def _stationary_task(
    density: FourierDensity, index: int, ks: list[float], points: np.ndarray
) -> dict[str, list[dict[str, Any]]]:
    ladder = stationary_phase_ladder(density, ks, points)
    rows = [
        {"density": index, "k": float(k), "sup_residual": float(r), "scaled_residual": float(s), "status": STATUS_OK}
        for k, r, s in zip(ladder.ks, ladder.sup_residuals, ladder.scaled_residuals, strict=True)
    ]
    return {ROWS_NAME: rows}


def _run_stationary(run: _Run) -> tuple[pd.DataFrame, dict[str, Any]]:
    config = run.config
    settings = config.stationary
    rng = np.random.default_rng(config.seed)
    densities = [
        FourierDensity.random(rng, max_order=settings.max_order, ripple=settings.ripple)
        for _ in range(settings.densities)
    ]
    record = {"seed": config.seed, "densities": [density.to_data() for density in densities]}
    (run.out_dir / "densities.json").write_text(json.dumps(record, indent=2) + "\n")
    points = stationary_points(settings.radii, settings.angles)
    writer = run.writer(ROWS_NAME, STATIONARY_COLUMNS, ["density", "k"])
    tasks: list[Task] = [
        partial(_stationary_task, density, index, list(settings.ks), points)
        for index, density in enumerate(densities)
        if not all(writer.is_done(density=index, k=float(k)) for k in settings.ks)
    ]
    with run.timer("ladder"):
        run.dispatch(tasks, {ROWS_NAME: writer})
    frame = writer.finalize()
    decreasing = {
        str(index): bool(np.all(np.diff(group.sort_values("k")["scaled_residual"].to_numpy()) < 0))
        for index, group in frame.groupby("density")
    }
    return frame, {"decreasing": decreasing, "all_decreasing": bool(decreasing) and all(decreasing.values())}


EXPERIMENT_MAP: dict[str, Callable[[_Run], tuple[pd.DataFrame, dict[str, Any]]]] = {
    "corner_scatter": _run_sweep,
    "jump_probe": _run_jump_probe,
    "nonradiating_source": _run_sources,
    "radial_nonscatter": _run_radial,
    "stationary_phase": _run_stationary,
    "sweep": _run_sweep,
}


def planned_tasks(config: ExperimentConfig) -> int:
    """Number of work units a fresh run dispatches, for progress reporting."""
    levels = len(config.levels)
    if config.kind in ("sweep", "corner_scatter") and config.k_range is not None:
        return levels * len(config.k_range.values())
    if config.kind == "radial_nonscatter":
        return levels * sum(config.radial.roots_per_order.values())
    if config.kind == "nonradiating_source":
        return levels
    if config.kind == "stationary_phase":
        return config.stationary.densities
    shape = config.build_shape()
    corners = len(shape.vertices) if config.probe.corners and isinstance(shape, Polygon) else 0
    return len(config.probe.points) + corners + config.probe.boundary_count


def _prepare_output(out_dir: Path, config: ExperimentConfig) -> None:
    """Create the directory and echo the config, refusing to resume another configuration's results."""
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / CONFIG_ECHO_NAME
    echo = {
        "config_hash": config.config_hash(),
        "seed": config.seed,
        "config": config.model_dump(mode="json", exclude={"output_dir", "max_cells", "max_solves"}),
    }
    if path.is_file():
        previous = json.loads(path.read_text())
        if previous.get("config_hash") != echo["config_hash"]:
            msg = f"{out_dir} holds results of another configuration; use a fresh output directory"
            raise ConfigError(msg)
        return
    path.write_text(json.dumps(echo, indent=2, sort_keys=True) + "\n")


def run_experiment(
    config: ExperimentConfig,
    out_dir: str | Path | None = None,
    *,
    workers: int = 1,
    progress_callback: Callable[[int], None] | None = None,
) -> RunResult:
    """Run one experiment and write its result directory.

    Rows already present in the directory from an interrupted run with the same config are kept
    and not recomputed.

    Args:
        config: Validated experiment configuration
        out_dir: Result directory, defaulting to the config's output_dir
        workers: Worker threads for independent units of work
        progress_callback: Called with 1 after each unit of work

    Returns:
        RunResult with the manifest and the sorted rows

    Raises:
        ConfigError: If no output directory is given or it holds another config's results
        BudgetExceededError: If the budget leaves no rows at all
    """
    target = out_dir or config.output_dir
    if target is None:
        msg = "no output directory given"
        raise ConfigError(msg)
    out = Path(target)
    _prepare_output(out, config)

    started = datetime.now(UTC)
    start = time.perf_counter()
    run = _Run(config=config, out_dir=out, workers=max(1, workers), progress_callback=progress_callback)
    frame, summary = EXPERIMENT_MAP[config.kind](run)
    if frame.empty and run.truncation is not None:
        raise BudgetExceededError(run.truncation)

    manifest = Manifest(
        kind=config.kind,
        config=config.model_dump(mode="json"),
        config_hash=config.config_hash(),
        seed=config.seed,
        versions=library_versions(),
        started_at=started.isoformat(),
        wall_time_seconds=time.perf_counter() - start,
        timings=run.timings,
        truncated=run.truncation is not None,
        truncation_reason=run.truncation,
        rows=len(frame),
        failed_rows=int((frame["status"] != STATUS_OK).sum()),
        warnings=run.warnings,
        summary=summary,
        files=collect_files(out),
    )
    write_manifest(out, manifest)
    return RunResult(out_dir=out, manifest=manifest, rows=frame)
