"""Tests for the Lippmann-Schwinger solver."""
