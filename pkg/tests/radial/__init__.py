"""Tests for radial transmission spectra."""
