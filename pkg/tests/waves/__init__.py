"""Tests for incident waves."""
