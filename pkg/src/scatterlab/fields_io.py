"""Export of grid fields and far-field patterns.

Binary field layout (little endian):

    magic     4 bytes   b"SLF1"
    dim       uint32
    counts    uint32 x dim
    spacing   float64
    origin    float64 x dim
    data      complex64 x prod(counts), C order
"""

from __future__ import annotations

from typing import TYPE_CHECKING

import numpy as np
import pandas as pd

from scatterlab.geometry import Grid

if TYPE_CHECKING:
    from pathlib import Path

    from scatterlab.lippmann import FarFieldPattern

MAGIC = b"SLF1"
MAX_CSV_CELLS = 2**16
CSV_FLOAT_FORMAT = "%.10e"


class FieldFormatError(ValueError):
    """Raised when a field file is malformed or a field is too large for CSV."""


def write_field(path: Path, grid: Grid, values: np.ndarray) -> None:
    data = np.asarray(values)
    if data.shape != grid.counts:
        msg = f"field of shape {data.shape} does not match grid counts {grid.counts}"
        raise FieldFormatError(msg)
    with path.open("wb") as handle:
        handle.write(MAGIC)
        handle.write(np.array([grid.dimension, *grid.counts], dtype="<u4").tobytes())
        handle.write(np.array([grid.spacing, *grid.origin], dtype="<f8").tobytes())
        handle.write(np.ascontiguousarray(data, dtype="<c8").tobytes())


def read_field(path: Path) -> tuple[Grid, np.ndarray]:
    raw = path.read_bytes()
    if raw[:4] != MAGIC:
        msg = f"{path} is not a scatterlab field file"
        raise FieldFormatError(msg)
    offset = 4
    dim = int(np.frombuffer(raw, dtype="<u4", count=1, offset=offset)[0])
    offset += 4
    counts = tuple(int(c) for c in np.frombuffer(raw, dtype="<u4", count=dim, offset=offset))
    offset += 4 * dim
    header = np.frombuffer(raw, dtype="<f8", count=dim + 1, offset=offset)
    offset += 8 * (dim + 1)
    expected = int(np.prod(counts))
    if len(raw) - offset != 8 * expected:
        msg = f"{path} holds {(len(raw) - offset) // 8} values, expected {expected}"
        raise FieldFormatError(msg)
    data = np.frombuffer(raw, dtype="<c8", count=expected, offset=offset).reshape(counts)
    grid = Grid(origin=tuple(header[1:]), spacing=float(header[0]), counts=counts)
    return grid, data.astype(complex)


def write_field_csv(path: Path, grid: Grid, values: np.ndarray) -> None:
    """Write one row per cell: coordinates, Re, Im. Only for small grids."""
    if grid.cell_count > MAX_CSV_CELLS:
        msg = f"grid has {grid.cell_count} cells; CSV export is limited to {MAX_CSV_CELLS}"
        raise FieldFormatError(msg)
    centers = grid.cell_centers()
    data = np.asarray(values).ravel()
    frame = pd.DataFrame(centers, columns=["x", "y", "z"][: grid.dimension])
    frame["re"] = data.real
    frame["im"] = data.imag
    frame.to_csv(path, index=False, float_format=CSV_FLOAT_FORMAT)


def write_far_field_csv(path: Path, pattern: FarFieldPattern) -> None:
    """Write direction angle(s), Re and Im of u^∞."""
    angles = pattern.angles
    if pattern.dimension == 2:  # noqa: PLR2004
        frame = pd.DataFrame({"angle": angles})
    else:
        frame = pd.DataFrame({"polar": angles[:, 0], "azimuth": angles[:, 1]})
    frame["re"] = pattern.values.real
    frame["im"] = pattern.values.imag
    frame.to_csv(path, index=False, float_format=CSV_FLOAT_FORMAT)
