"""Tests for mimiclearn.trees."""
