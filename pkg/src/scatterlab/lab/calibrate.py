"""Calibration of the scattering floor ρ_min from a multi-level corner sweep."""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import TYPE_CHECKING, Any, NamedTuple

from scipy import optimize

from scatterlab.lab.manifest import collect_files, load_manifest, write_manifest
from scatterlab.lab.runner import STATUS_OK, run_experiment
from scatterlab.radial import RadialMedium, SpectrumError, te_spectrum
from scatterlab.shapes import Disk
from scatterlab.waves import HerglotzWave

if TYPE_CHECKING:
    from collections.abc import Callable, Sequence

    from scatterlab.lab.config import ExperimentConfig

FLOOR_NAME = "floor.json"
MIN_CALIBRATION_LEVELS = 3
_ORDER_BRACKET = (1e-3, 20.0)


class CalibrationError(ValueError):
    """Raised when a configuration cannot be calibrated or the levels do not converge monotonically."""


class CalibrationResult(NamedTuple):
    levels: tuple[float, ...]
    min_rho: tuple[float, ...]
    extrapolated: float | None
    order: float | None
    floor: float
    calibrated: bool
    warning: str | None

    def to_data(self) -> dict[str, Any]:
        return {
            "levels": list(self.levels),
            "min_rho": list(self.min_rho),
            "extrapolated": self.extrapolated,
            "order": self.order,
            "floor": self.floor,
            "calibrated": self.calibrated,
            "warning": self.warning,
        }


def richardson_extrapolate(levels: Sequence[float], values: Sequence[float]) -> tuple[float, float]:
    """Fit r(h) = r0 + C h^p through the three finest levels.

    Args:
        levels: Grid spacings, coarse to fine
        values: Measured values per level

    Returns:
        The extrapolated value r0 and the observed order p

    Raises:
        CalibrationError: If the differences do not shrink monotonically
    """
    if len(levels) != len(values) or len(levels) < MIN_CALIBRATION_LEVELS:
        msg = f"extrapolation needs at least {MIN_CALIBRATION_LEVELS} levels with values"
        raise CalibrationError(msg)
    h1, h2, h3 = (float(h) for h in levels[-3:])
    r1, r2, r3 = (float(v) for v in values[-3:])
    if not h1 > h2 > h3 > 0:
        msg = "levels must be positive and refine monotonically"
        raise CalibrationError(msg)
    d1, d2 = r1 - r2, r2 - r3
    if d1 == 0 or d2 == 0 or d1 * d2 < 0 or abs(d2) >= abs(d1):
        msg = f"non-monotone convergence: differences {d1:.3e}, {d2:.3e}"
        raise CalibrationError(msg)
    ratio = d1 / d2

    def mismatch(p: float) -> float:
        return (h1**p - h2**p) / (h2**p - h3**p) - ratio

    low, high = _ORDER_BRACKET
    if mismatch(low) * mismatch(high) > 0:
        msg = f"no convergence order in [{low}, {high}] explains the difference ratio {ratio:.3g}"
        raise CalibrationError(msg)
    order = float(optimize.brentq(mismatch, low, high))
    scale = d2 / (h2**order - h3**order)
    return r3 - scale * h3**order, order


def check_no_radial_root(config: ExperimentConfig) -> None:
    """Reject disk sweeps with a single-mode Herglotz wave whose k range contains a transmission eigenvalue.

    At such a k the wave does not scatter, so the sweep minimum says nothing about corners.

    Raises:
        CalibrationError: If the sweep contains a known radial root
    """
    shape = config.build_shape()
    contrast = config.build_contrast()
    if not isinstance(shape, Disk) or not contrast.is_constant or any(shape.center) or config.k_range is None:
        return
    try:
        medium = RadialMedium(radius=shape.radius, index=contrast.coefficients[0])
    except SpectrumError:
        return
    for wave in config.build_waves(config.k_range.start):
        if not isinstance(wave, HerglotzWave) or len(wave.density.orders) != 1:
            continue
        order = abs(wave.density.orders[0])
        spectrum = te_spectrum(medium, order, config.k_range.start, config.k_range.stop)
        roots = spectrum.of_order(order)
        if roots:
            msg = f"the sweep contains the transmission eigenvalue k={roots[0]:.6f} of order {order}"
            raise CalibrationError(msg)


def calibrate_floor(
    config: ExperimentConfig,
    out_dir: str | Path | None = None,
    *,
    workers: int = 1,
    progress_callback: Callable[[int], None] | None = None,
) -> CalibrationResult:
    """Run the corner sweep at every level and derive ρ_min from the minima over k.

    ρ_min is half the extrapolated minimum. When the minima do not converge monotonically the
    finest-level minimum is halved instead, and the result is marked uncalibrated with a warning.
    The result is written to floor.json and recorded in the manifest.

    Args:
        config: Sweep configuration with at least 3 grid levels
        out_dir: Result directory, defaulting to the config's output_dir
        workers: Worker threads for the sweep
        progress_callback: Called with 1 after each (level, k) unit

    Returns:
        CalibrationResult with per-level evidence

    Raises:
        CalibrationError: If there are fewer than 3 levels, the sweep contains a radial root,
            or no level produced a converged row
    """
    if len(config.levels) < MIN_CALIBRATION_LEVELS:
        msg = f"calibration needs at least {MIN_CALIBRATION_LEVELS} grid levels, got {len(config.levels)}"
        raise CalibrationError(msg)
    check_no_radial_root(config)
    sweep = config.model_copy(update={"kind": "corner_scatter", "floor": None})
    result = run_experiment(sweep, out_dir, workers=workers, progress_callback=progress_callback)

    ok = result.rows[result.rows["status"] == STATUS_OK]
    minima = ok.groupby("level")["rho"].min().sort_index(ascending=False)
    if minima.empty:
        msg = "no converged sweep rows to calibrate from"
        raise CalibrationError(msg)
    levels = tuple(float(h) for h in minima.index)
    values = tuple(float(v) for v in minima.to_numpy())

    extrapolated: float | None = None
    order: float | None = None
    warning: str | None = None
    try:
        extrapolated, order = richardson_extrapolate(levels, values)
        if not extrapolated > 0 or not math.isfinite(extrapolated):
            msg = f"extrapolated minimum {extrapolated:.3e} is not positive"
            raise CalibrationError(msg)
    except CalibrationError as e:
        warning = f"calibration failed ({e}); using the finest-level minimum"
        calibration = CalibrationResult(
            levels=levels,
            min_rho=values,
            extrapolated=extrapolated,
            order=order,
            floor=values[-1] / 2,
            calibrated=False,
            warning=warning,
        )
    else:
        calibration = CalibrationResult(
            levels=levels,
            min_rho=values,
            extrapolated=extrapolated,
            order=order,
            floor=extrapolated / 2,
            calibrated=True,
            warning=None,
        )

    data = {**calibration.to_data(), "config_hash": result.manifest.config_hash, "seed": config.seed}
    (result.out_dir / FLOOR_NAME).write_text(json.dumps(data, indent=2) + "\n")
    manifest = load_manifest(result.out_dir)
    manifest.summary["calibration"] = calibration.to_data()
    if warning:
        manifest.warnings.append(warning)
    manifest.files = collect_files(result.out_dir)
    write_manifest(result.out_dir, manifest)
    return calibration


def load_floor(result_dir: str | Path) -> float:
    """Read ρ_min from a calibration result directory.

    Raises:
        CalibrationError: If the directory has no floor.json
    """
    path = Path(result_dir) / FLOOR_NAME
    if not path.is_file():
        msg = f"no {FLOOR_NAME} in {result_dir}"
        raise CalibrationError(msg)
    floor = float(json.loads(path.read_text())["floor"])
    if not math.isfinite(floor) or floor <= 0:
        msg = f"{path} holds an invalid floor {floor}"
        raise CalibrationError(msg)
    return floor
