"""Base class for incident waves."""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import asdict, dataclass, replace
from typing import TYPE_CHECKING, Any, Self

if TYPE_CHECKING:
    import numpy as np
    from numpy.typing import ArrayLike


class WaveError(ValueError):
    """Raised for invalid incident-wave parameters."""


@dataclass(frozen=True, kw_only=True)
class IncidentWave(ABC):
    """Base class for all incident waves v with Δv + k²v = 0.

    All waves provide a type tag and a wavenumber. Additional fields are
    defined by specific wave subclasses.
    """

    type: str
    k: float

    def __post_init__(self) -> None:
        if not self.k > 0:
            msg = f"wavenumber must be positive, got {self.k}"
            raise WaveError(msg)

    @property
    @abstractmethod
    def dimension(self) -> int: ...

    @abstractmethod
    def evaluate(self, points: ArrayLike) -> np.ndarray:
        """Evaluate v at points of shape (N, m), returning complex values of shape (N,)."""

    def with_wavenumber(self, k: float) -> Self:
        return replace(self, k=k)

    def to_data(self) -> dict[str, Any]:
        """Serialize to the JSON object {"type": ..., "k": ..., parameters...}."""
        return asdict(self)
