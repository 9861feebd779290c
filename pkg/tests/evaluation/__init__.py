"""Tests for mimiclearn.evaluation."""
