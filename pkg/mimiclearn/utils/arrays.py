"""Array codec for the JSON model envelope."""

from typing import Any, Dict

import numpy as np


def encode_array(array: np.ndarray) -> Dict[str, Any]:
    """Encode an array as shape plus flattened row-major values.

    Python floats serialize with round-trip precision, so decoding
    reproduces the array bitwise.
    """
    array = np.asarray(array, dtype=np.float64)
    return {"shape": list(array.shape), "data": array.ravel(order="C").tolist()}


def decode_array(payload: Dict[str, Any]) -> np.ndarray:
    """Decode an array produced by :func:`encode_array`.

    Raises:
        ValueError: If the data length does not match the declared shape
    """
    shape = tuple(int(s) for s in payload["shape"])
    data = np.asarray(payload["data"], dtype=np.float64)
    expected = int(np.prod(shape)) if shape else 1
    if data.size != expected:
        raise ValueError(
            f"Array payload has {data.size} values but shape {list(shape)} needs {expected}"
        )
    return data.reshape(shape)
