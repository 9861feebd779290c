"""Named sub-seed derivation.

All randomness in a run flows from one root seed. Components ask for a
sub-seed by name (and trial/fold indices), so concurrent and sequential
execution draw identical streams.
"""

import hashlib
from typing import Union

Key = Union[str, int]


def derive_seed(root: int, *keys: Key) -> int:
    """Derive a deterministic 63-bit seed from a root seed and a key path.

    Args:
        root: Global seed
        *keys: Names and indices identifying the consumer

    Returns:
        Non-negative integer usable with ``numpy.random.default_rng``
    """
    material = "/".join([str(int(root))] + [str(k) for k in keys])
    digest = hashlib.sha256(material.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big") >> 1
