"""Tests for shape descriptors."""
