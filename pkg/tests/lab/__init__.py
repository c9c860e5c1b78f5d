"""Tests for batch experiments, result directories, calibration and plots."""
