"""Tests for volume potentials."""
