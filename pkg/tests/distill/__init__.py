"""Tests for mimiclearn.distill."""
