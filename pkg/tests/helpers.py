"""Small fixtures shared by the test modules."""

from pathlib import Path
from typing import List, Optional, Sequence

import numpy as np

from mimiclearn.data import Dataset, infer_kind
from mimiclearn.models import Task


def write_csv(directory: str, lines: Sequence[str], name: str = "data.csv") -> Path:
    """Write raw CSV lines into ``directory`` and return the path."""
    path = Path(directory) / name
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def make_dataset(
    static: np.ndarray,
    temporal: np.ndarray,
    mor: Sequence[int],
    vfd: Optional[Sequence[int]] = None,
    static_names: Optional[List[str]] = None,
    temporal_names: Optional[List[str]] = None,
) -> Dataset:
    """Build a Dataset from arrays; NaN marks a missing entry."""
    static = np.asarray(static, dtype=np.float64)
    temporal = np.asarray(temporal, dtype=np.float64)
    static_mask = np.isnan(static)
    temporal_mask = np.isnan(temporal)
    q, p = static.shape[1], temporal.shape[2]
    return Dataset(
        static=static,
        temporal=temporal,
        static_mask=static_mask,
        temporal_mask=temporal_mask,
        labels={Task.MOR: np.asarray(mor), Task.VFD: np.asarray(vfd if vfd is not None else mor)},
        static_names=static_names or [f"S{i}" for i in range(q)],
        temporal_names=temporal_names or [f"V{i}" for i in range(p)],
        static_kinds=[infer_kind(static[~static_mask[:, i], i]) for i in range(q)],
        temporal_kinds=[infer_kind(temporal[:, :, i][~temporal_mask[:, :, i]]) for i in range(p)],
    )


def separable_problem(n: int = 100, seed: int = 0):
    """Two Gaussian blobs in 2-d with labels 0/1."""
    rng = np.random.default_rng(seed)
    y = np.repeat([0, 1], n // 2)
    x = rng.normal(0.0, 0.5, size=(n, 2)) + np.where(y[:, None] == 1, 2.0, -2.0)
    return x, y
