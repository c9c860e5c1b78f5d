"""Batch experiments, result persistence and plot emission."""

from scatterlab.lab.calibrate import CalibrationError, CalibrationResult, calibrate_floor, load_floor
from scatterlab.lab.config import ConfigError, ExperimentConfig, load_config
from scatterlab.lab.manifest import Manifest, ManifestError, load_manifest
from scatterlab.lab.plots import emit_plots
from scatterlab.lab.runner import BudgetExceededError, RunResult, run_experiment

__all__ = [
    "BudgetExceededError",
    "CalibrationError",
    "CalibrationResult",
    "ConfigError",
    "ExperimentConfig",
    "Manifest",
    "ManifestError",
    "RunResult",
    "calibrate_floor",
    "emit_plots",
    "load_config",
    "load_floor",
    "load_manifest",
    "run_experiment",
]
