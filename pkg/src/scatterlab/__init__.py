from scatterlab.geometry import Contrast, Grid, MediumField, rasterize
from scatterlab.lab import ExperimentConfig, load_config, run_experiment
from scatterlab.lippmann import far_field, scattering_strength, solve_scattering

__all__ = [
    "Contrast",
    "ExperimentConfig",
    "Grid",
    "MediumField",
    "far_field",
    "load_config",
    "rasterize",
    "run_experiment",
    "scattering_strength",
    "solve_scattering",
]
