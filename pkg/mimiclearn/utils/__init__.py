"""Utility modules for mimiclearn."""

from .arrays import decode_array, encode_array
from .seeding import derive_seed

__all__ = [
    "decode_array",
    "encode_array",
    "derive_seed",
]
