"""Flattening of static + temporal data into design matrices."""

import logging
from typing import List, Tuple

import numpy as np

from ..models import CsvSchema, FeatureView
from .dataset import ColumnSource, Dataset, DesignMatrix

logger = logging.getLogger(__name__)


def view_columns(ds: Dataset, view: FeatureView) -> List[Tuple[str, ColumnSource]]:
    """Full (pre-drop) column list of a view as (name, source) pairs.

    Static columns come first, then temporal columns variable-major and
    day-minor, e.g. ``t_MAP_d0, t_MAP_d1, ..., t_PaO2_d0``.
    """
    schema = CsvSchema()
    columns: List[Tuple[str, ColumnSource]] = []
    if view in (FeatureView.ALL, FeatureView.STATIC_PLUS_DAY0):
        columns.extend(
            (schema.static_column(name), ("static", q, -1))
            for q, name in enumerate(ds.static_names)
        )
    days = range(1) if view == FeatureView.STATIC_PLUS_DAY0 else range(ds.t)
    for p, name in enumerate(ds.temporal_names):
        columns.extend((schema.temporal_column(name, day), ("temporal", p, day)) for day in days)
    return columns


def source_values(ds: Dataset, source: ColumnSource) -> np.ndarray:
    """Column of values a source refers to."""
    kind, index, day = source
    if kind == "static":
        return ds.static[:, index]
    return ds.temporal[:, day, index]


def flatten(ds: Dataset, view: FeatureView = FeatureView.ALL) -> DesignMatrix:
    """Flatten an imputed dataset into a design matrix for a feature view.

    Columns that are constant across all samples (exact equality) are
    dropped and recorded.

    Raises:
        ValueError: If the dataset still has unobserved values
    """
    view = FeatureView(view)
    if not ds.is_imputed:
        raise ValueError("Dataset must be imputed before flattening")

    columns = view_columns(ds, view)
    n = ds.n_samples
    full = np.empty((n, len(columns)), dtype=np.float64)
    for j, (_, source) in enumerate(columns):
        full[:, j] = source_values(ds, source)

    if n > 0:
        constant = np.all(full == full[0:1, :], axis=0)
    else:
        constant = np.zeros(len(columns), dtype=bool)
    dropped = [int(j) for j in np.flatnonzero(constant)]
    kept = np.flatnonzero(~constant)

    if dropped:
        logger.info(
            f"Dropping {len(dropped)} constant column(s) from view {view.value}: "
            + ", ".join(columns[j][0] for j in dropped)
        )
    return DesignMatrix(
        values=full[:, kept],
        column_names=[columns[j][0] for j in kept],
        dropped_columns=dropped,
        dropped_names=[columns[j][0] for j in dropped],
        column_sources=[columns[j][1] for j in kept],
        view=view,
    )


def temporal_view(ds: Dataset, view: FeatureView = FeatureView.ALL) -> np.ndarray:
    """Temporal tensor a sequence model may see under a view.

    ``static_plus_day0`` exposes day 0 only; the other views expose all days.
    """
    if FeatureView(view) == FeatureView.STATIC_PLUS_DAY0:
        return ds.temporal[:, :1, :].copy()
    return ds.temporal.copy()
