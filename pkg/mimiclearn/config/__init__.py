"""Configuration loading for mimiclearn."""

from .loader import ConfigLoader

__all__ = ["ConfigLoader"]
