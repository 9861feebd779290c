"""Missing-value imputation: majority value for binary variables, mean otherwise."""

import dataclasses
import logging

import numpy as np

from .dataset import Dataset, DatasetFormatError, VarKind

logger = logging.getLogger(__name__)


def fill_value(observed: np.ndarray, kind: VarKind, name: str) -> float:
    """Imputation value of one variable from its observed entries.

    Binary ties resolve to 0.

    Raises:
        DatasetFormatError: If the variable has no observed value
    """
    if observed.size == 0:
        raise DatasetFormatError(f"Variable '{name}' has no observed values to impute from")
    if kind == VarKind.BINARY:
        ones = int(np.count_nonzero(observed == 1.0))
        zeros = int(observed.size - ones)
        return 1.0 if ones > zeros else 0.0
    return float(np.mean(observed))


def impute_missing(ds: Dataset) -> Dataset:
    """Fill every unobserved entry; masks are kept unchanged.

    Temporal statistics are pooled over all samples and all days of a
    variable. Statistics only ever read entries whose mask is false, so
    imputing an imputed dataset is a no-op.

    Args:
        ds: Dataset, possibly with NaN entries

    Returns:
        New Dataset with no unobserved values
    """
    static = ds.static.copy()
    for q, (name, kind) in enumerate(zip(ds.static_names, ds.static_kinds)):
        missing = ds.static_mask[:, q]
        value = fill_value(ds.static[~missing, q], kind, name)
        static[missing, q] = value

    temporal = ds.temporal.copy()
    for p, (name, kind) in enumerate(zip(ds.temporal_names, ds.temporal_kinds)):
        missing = ds.temporal_mask[:, :, p]
        value = fill_value(ds.temporal[:, :, p][~missing], kind, name)
        temporal[:, :, p][missing] = value

    n_filled = int(ds.static_mask.sum() + ds.temporal_mask.sum())
    logger.debug(f"Imputed {n_filled} missing entries")
    return dataclasses.replace(ds, static=static, temporal=temporal)
