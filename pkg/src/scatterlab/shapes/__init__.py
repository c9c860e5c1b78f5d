"""Shape descriptors for the inhomogeneity D."""

from typing import Any

from scatterlab.shapes.ball import Ball
from scatterlab.shapes.base import BoundarySample, Shape, ShapeError
from scatterlab.shapes.disk import Disk
from scatterlab.shapes.ellipse import Ellipse
from scatterlab.shapes.polygon import Polygon

__all__ = [
    "SHAPE_TYPE_MAP",
    "Ball",
    "BoundarySample",
    "Disk",
    "Ellipse",
    "Polygon",
    "Shape",
    "ShapeError",
    "create_shape_from_data",
]

SHAPE_TYPE_MAP: dict[str, type[Shape]] = {
    "ball": Ball,
    "disk": Disk,
    "ellipse": Ellipse,
    "polygon": Polygon,
}


def create_shape_from_data(shape_data: dict[str, Any]) -> Shape:
    """Create a shape instance from its JSON object {"type": ..., parameters...}."""
    shape_type = shape_data.get("type")
    if shape_type not in SHAPE_TYPE_MAP:
        msg = f"unknown shape type {shape_type!r}, expected one of {sorted(SHAPE_TYPE_MAP)}"
        raise ShapeError(msg)
    try:
        return SHAPE_TYPE_MAP[shape_type](**shape_data)
    except TypeError as e:
        msg = f"invalid parameters for {shape_type} shape: {e}"
        raise ShapeError(msg) from e
