"""Tests for mimiclearn.neural."""
