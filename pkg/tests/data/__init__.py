"""Tests for mimiclearn.data."""
