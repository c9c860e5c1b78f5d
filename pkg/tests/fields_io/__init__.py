"""Tests for field export."""
