"""CSV ingestion and export of datasets."""

import logging
import re
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

import numpy as np
import pandas as pd

from ..models import CsvSchema, Task
from .dataset import Dataset, DatasetFormatError, VarKind

logger = logging.getLogger(__name__)


def infer_kind(observed: np.ndarray) -> VarKind:
    """Tag a variable binary when its observed value set is exactly {0, 1}."""
    values = set(np.unique(observed).tolist())
    return VarKind.BINARY if values == {0.0, 1.0} else VarKind.CONTINUOUS


def _parse_header(
    columns: List[str], schema: CsvSchema
) -> Tuple[List[str], List[str], int, Dict[Tuple[str, int], str]]:
    """Split header columns into static names, temporal names and day count.

    Raises:
        DatasetFormatError: If the header does not follow the schema
    """
    required = [schema.id_column] + [schema.label_columns[task.value] for task in Task]
    for column in required:
        if column not in columns:
            raise DatasetFormatError(f"Malformed header: missing column '{column}'")
    if len(set(columns)) != len(columns):
        raise DatasetFormatError("Malformed header: duplicate column names")

    temporal_pattern = re.compile(
        rf"^{re.escape(schema.temporal_prefix)}(?P<name>.+){re.escape(schema.day_marker)}(?P<day>\d+)$"
    )
    static_names: List[str] = []
    temporal_names: List[str] = []
    days_by_name: Dict[str, List[int]] = {}
    temporal_columns: Dict[Tuple[str, int], str] = {}

    for column in columns:
        if column in required:
            continue
        match = temporal_pattern.match(column)
        if match:
            name, day = match.group("name"), int(match.group("day"))
            if name not in days_by_name:
                days_by_name[name] = []
                temporal_names.append(name)
            days_by_name[name].append(day)
            temporal_columns[(name, day)] = column
        elif column.startswith(schema.static_prefix) and len(column) > len(schema.static_prefix):
            static_names.append(column[len(schema.static_prefix) :])
        else:
            raise DatasetFormatError(f"Malformed header: unrecognised column '{column}'")

    if not temporal_names:
        raise DatasetFormatError("Malformed header: no temporal columns")

    t_steps = max(len(days) for days in days_by_name.values())
    for name, days in days_by_name.items():
        if sorted(days) != list(range(t_steps)):
            raise DatasetFormatError(
                f"Malformed header: temporal variable '{name}' must have days 0..{t_steps - 1}"
            )
    return static_names, temporal_names, t_steps, temporal_columns


def _numeric_column(frame: pd.DataFrame, column: str) -> np.ndarray:
    """Convert a string column to floats, empty cells becoming NaN.

    Raises:
        DatasetFormatError: On a non-numeric, non-empty cell
    """
    raw = frame[column].str.strip()
    empty = raw == ""
    values = pd.to_numeric(raw.where(~empty), errors="coerce")
    bad = values.isna() & ~empty
    if bad.any():
        row = int(np.flatnonzero(bad.to_numpy())[0])
        raise DatasetFormatError(
            f"Non-numeric cell in column '{column}' at data row {row + 1}: '{frame[column].iloc[row]}'"
        )
    return values.to_numpy(dtype=np.float64)


def load_dataset(path: Union[str, Path], schema: Optional[CsvSchema] = None) -> Dataset:
    """Load a dataset CSV.

    Args:
        path: CSV file with header ``patient_id,label_mor,label_vfd,s_*,t_*_d<k>``
        schema: Column-naming convention (defaults to :class:`CsvSchema`)

    Returns:
        Dataset with NaN and a true mask entry for every empty cell

    Raises:
        FileNotFoundError: If the file doesn't exist
        DatasetFormatError: On malformed header, non-numeric cells or bad labels
    """
    schema = schema or CsvSchema()
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Dataset file not found: {path}")

    frame = pd.read_csv(
        path, dtype=str, keep_default_na=False, na_filter=False, encoding="utf-8"
    )
    static_names, temporal_names, t_steps, temporal_columns = _parse_header(
        list(frame.columns), schema
    )
    n = len(frame)

    labels = {}
    for task in Task:
        column = schema.label_columns[task.value]
        values = _numeric_column(frame, column)
        if np.isnan(values).any() or not np.isin(values, (0.0, 1.0)).all():
            raise DatasetFormatError(f"Label column '{column}' must only contain 0 and 1")
        labels[task] = values.astype(np.int64)

    static = np.empty((n, len(static_names)), dtype=np.float64)
    for q, name in enumerate(static_names):
        static[:, q] = _numeric_column(frame, schema.static_column(name))

    temporal = np.empty((n, t_steps, len(temporal_names)), dtype=np.float64)
    for p, name in enumerate(temporal_names):
        for day in range(t_steps):
            temporal[:, day, p] = _numeric_column(frame, temporal_columns[(name, day)])

    static_mask = np.isnan(static)
    temporal_mask = np.isnan(temporal)
    static_kinds = [infer_kind(static[~static_mask[:, q], q]) for q in range(len(static_names))]
    temporal_kinds = [
        infer_kind(temporal[:, :, p][~temporal_mask[:, :, p]]) for p in range(len(temporal_names))
    ]

    logger.info(
        f"Loaded {n} samples with {len(static_names)} static and "
        f"{len(temporal_names)}x{t_steps} temporal variables from {path}"
    )
    return Dataset(
        static=static,
        temporal=temporal,
        static_mask=static_mask,
        temporal_mask=temporal_mask,
        labels=labels,
        static_names=static_names,
        temporal_names=temporal_names,
        static_kinds=static_kinds,
        temporal_kinds=temporal_kinds,
        patient_ids=frame[schema.id_column].tolist(),
    )


def _format_cell(value: float) -> str:
    if np.isnan(value):
        return ""
    if float(value).is_integer():
        return str(int(value))
    return repr(float(value))


def write_dataset(ds: Dataset, path: Union[str, Path], schema: Optional[CsvSchema] = None) -> Path:
    """Write a dataset as CSV; missing entries become empty cells.

    Values are written with round-trip precision so that loading the file
    reproduces every observed value exactly.
    """
    schema = schema or CsvSchema()
    columns: Dict[str, List[str]] = {schema.id_column: list(ds.patient_ids)}
    for task in Task:
        columns[schema.label_columns[task.value]] = [str(int(v)) for v in ds.labels[task]]

    static = np.where(ds.static_mask, np.nan, ds.static)
    temporal = np.where(ds.temporal_mask, np.nan, ds.temporal)
    for q, name in enumerate(ds.static_names):
        columns[schema.static_column(name)] = [_format_cell(v) for v in static[:, q]]
    for p, name in enumerate(ds.temporal_names):
        for day in range(ds.t):
            columns[schema.temporal_column(name, day)] = [
                _format_cell(v) for v in temporal[:, day, p]
            ]

    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    pd.DataFrame(columns).to_csv(path, index=False, lineterminator="\n", encoding="utf-8")
    return path
