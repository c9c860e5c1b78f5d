"""Tests for grids, contrasts and rasterization."""
