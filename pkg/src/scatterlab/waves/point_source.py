"""Point sources v(x) = Φ_k(x, z0)."""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

from scatterlab.constants import BOUNDARY_TOLERANCE
from scatterlab.kernels import kernel_values
from scatterlab.shapes.base import as_points
from scatterlab.waves.base import IncidentWave, WaveError

if TYPE_CHECKING:
    import numpy as np
    from numpy.typing import ArrayLike

    from scatterlab.shapes import Shape


@dataclass(frozen=True, kw_only=True)
class PointSource(IncidentWave):
    """Outgoing point source located at z0, outside the closure of D."""

    type: str = "point_source"

    source: tuple[float, ...] = (0.0, 0.0)

    def __post_init__(self) -> None:
        super().__post_init__()
        object.__setattr__(self, "source", tuple(float(c) for c in self.source))
        if len(self.source) not in (2, 3):
            msg = f"point source location must be 2D or 3D, got {len(self.source)} components"
            raise WaveError(msg)

    @property
    def dimension(self) -> int:
        return len(self.source)

    def evaluate(self, points: ArrayLike) -> np.ndarray:
        """Evaluate Φ_k(x, z0).

        Raises:
            SingularEvaluationError: If a point coincides with z0
        """
        pts = as_points(points, self.dimension)
        return kernel_values(pts - self.source, self.dimension, self.k)

    def check_outside(self, shape: Shape) -> None:
        """Raise WaveError unless z0 lies outside the closure of the shape."""
        source = as_points(self.source, self.dimension)
        if shape.contains(source)[0] or shape.distance_to_boundary(source)[0] <= BOUNDARY_TOLERANCE:
            msg = f"point source {list(self.source)} must lie outside the closure of the {shape.type}"
            raise WaveError(msg)
