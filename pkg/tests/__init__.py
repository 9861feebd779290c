"""Test suite for mimiclearn."""
