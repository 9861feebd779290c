"""Tests for mimiclearn.linear."""
