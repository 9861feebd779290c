"""mimiclearn - Interpretable mimic learning for clinical time-series data."""

__version__ = "0.1.0"
