"""Tests for boundary jumps of second derivatives."""
