"""Tests for fundamental solutions."""
