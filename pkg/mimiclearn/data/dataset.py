"""Dataset and design-matrix types."""

from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Tuple

import numpy as np

from ..models import FeatureView, Task


class DatasetFormatError(ValueError):
    """Raised when a dataset file or array violates the schema."""


class VarKind(str, Enum):
    """Value type of a variable."""

    BINARY = "binary"
    CONTINUOUS = "continuous"


# (source, variable index, day); day is -1 for static columns
ColumnSource = Tuple[str, int, int]


@dataclass
class Dataset:
    """Static matrix (N x Q), temporal tensor (N x T x P), masks and labels.

    Unobserved entries hold NaN until :func:`impute_missing` fills them;
    the masks are kept afterwards so the original pattern stays visible.
    """

    static: np.ndarray
    temporal: np.ndarray
    static_mask: np.ndarray
    temporal_mask: np.ndarray
    labels: Dict[Task, np.ndarray]
    static_names: List[str]
    temporal_names: List[str]
    static_kinds: List[VarKind]
    temporal_kinds: List[VarKind]
    patient_ids: List[str] = field(default_factory=list)

    def __post_init__(self):
        self.static = np.asarray(self.static, dtype=np.float64)
        self.temporal = np.asarray(self.temporal, dtype=np.float64)
        self.static_mask = np.asarray(self.static_mask, dtype=bool)
        self.temporal_mask = np.asarray(self.temporal_mask, dtype=bool)
        labels = {}
        for task, values in self.labels.items():
            raw = np.asarray(values, dtype=np.float64)
            if not np.isin(raw, (0.0, 1.0)).all():
                raise DatasetFormatError(f"label {Task(task).value} must only contain 0 and 1")
            labels[Task(task)] = raw.astype(np.int64)
        self.labels = labels
        if not self.patient_ids:
            self.patient_ids = [str(i) for i in range(self.n_samples)]
        self.validate()

    @property
    def n_samples(self) -> int:
        return int(self.temporal.shape[0])

    @property
    def q(self) -> int:
        return int(self.static.shape[1])

    @property
    def t(self) -> int:
        return int(self.temporal.shape[1])

    @property
    def p(self) -> int:
        return int(self.temporal.shape[2])

    @property
    def feature_names(self) -> List[str]:
        """Names of the Q static and P temporal variables."""
        return list(self.static_names) + list(self.temporal_names)

    @property
    def is_imputed(self) -> bool:
        return not (np.isnan(self.static).any() or np.isnan(self.temporal).any())

    def missing_fraction(self) -> float:
        """Fraction of unobserved entries over static and temporal cells."""
        total = self.static_mask.size + self.temporal_mask.size
        if total == 0:
            return 0.0
        return float(self.static_mask.sum() + self.temporal_mask.sum()) / total

    def subset(self, indices: np.ndarray) -> "Dataset":
        """Return the rows at ``indices`` as a new Dataset."""
        indices = np.asarray(indices, dtype=np.int64)
        return Dataset(
            static=self.static[indices],
            temporal=self.temporal[indices],
            static_mask=self.static_mask[indices],
            temporal_mask=self.temporal_mask[indices],
            labels={task: values[indices] for task, values in self.labels.items()},
            static_names=list(self.static_names),
            temporal_names=list(self.temporal_names),
            static_kinds=list(self.static_kinds),
            temporal_kinds=list(self.temporal_kinds),
            patient_ids=[self.patient_ids[i] for i in indices],
        )

    def validate(self) -> None:
        """Check shapes, labels and binary tags.

        Raises:
            DatasetFormatError: On the first violated invariant
        """
        if self.static.ndim != 2:
            raise DatasetFormatError("static must be an N x Q matrix")
        if self.temporal.ndim != 3:
            raise DatasetFormatError("temporal must be an N x T x P tensor")
        n = self.n_samples
        if self.static.shape[0] != n:
            raise DatasetFormatError("static and temporal disagree on the sample count")
        if self.temporal_mask.shape != self.temporal.shape:
            raise DatasetFormatError("temporal_mask must align with temporal")
        if self.static_mask.shape != self.static.shape:
            raise DatasetFormatError("static_mask must align with static")
        if len(self.static_names) != self.q or len(self.static_kinds) != self.q:
            raise DatasetFormatError("static names/kinds must have one entry per static column")
        if len(self.temporal_names) != self.p or len(self.temporal_kinds) != self.p:
            raise DatasetFormatError(
                "temporal names/kinds must have one entry per temporal variable"
            )
        if len(set(self.feature_names)) != len(self.feature_names):
            raise DatasetFormatError("variable names must be unique")
        if len(self.patient_ids) != n:
            raise DatasetFormatError("patient_ids must have one entry per sample")
        if np.any(np.isnan(self.static) & ~self.static_mask):
            raise DatasetFormatError("unobserved static entries must be flagged in static_mask")
        if np.any(np.isnan(self.temporal) & ~self.temporal_mask):
            raise DatasetFormatError("unobserved temporal entries must be flagged in temporal_mask")
        for task in Task:
            if task not in self.labels:
                raise DatasetFormatError(f"missing label channel {task.value}")
            values = self.labels[task]
            if values.shape != (n,):
                raise DatasetFormatError(f"label {task.value} must have length {n}")
            if not np.isin(values, (0, 1)).all():
                raise DatasetFormatError(f"label {task.value} must only contain 0 and 1")
        for q, kind in enumerate(self.static_kinds):
            if kind == VarKind.BINARY:
                observed = self.static[~self.static_mask[:, q], q]
                if not np.isin(observed, (0.0, 1.0)).all():
                    raise DatasetFormatError(
                        f"binary static variable {self.static_names[q]} has values outside {{0,1}}"
                    )


@dataclass
class DesignMatrix:
    """Flattened N x D input with constant columns removed.

    ``dropped_columns`` index into the view's full column list (before
    dropping); ``column_sources`` tell where each kept column came from.
    """

    values: np.ndarray
    column_names: List[str]
    dropped_columns: List[int]
    dropped_names: List[str]
    column_sources: List[ColumnSource]
    view: FeatureView

    @property
    def d(self) -> int:
        return int(self.values.shape[1])

    @property
    def n_samples(self) -> int:
        return int(self.values.shape[0])

    def take_rows(self, indices: np.ndarray) -> "DesignMatrix":
        """Row subset sharing the column layout."""
        return DesignMatrix(
            values=self.values[np.asarray(indices, dtype=np.int64)],
            column_names=list(self.column_names),
            dropped_columns=list(self.dropped_columns),
            dropped_names=list(self.dropped_names),
            column_sources=list(self.column_sources),
            view=self.view,
        )
