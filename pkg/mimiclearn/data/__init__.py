"""Dataset schema, ingestion, imputation, flattening and synthesis."""

from .csv_io import infer_kind, load_dataset, write_dataset
from .dataset import Dataset, DatasetFormatError, DesignMatrix, VarKind
from .flatten import flatten, temporal_view, view_columns
from .impute import impute_missing
from .synth import informative_temporal_names, synth_generate

__all__ = [
    "Dataset",
    "DatasetFormatError",
    "DesignMatrix",
    "VarKind",
    "infer_kind",
    "load_dataset",
    "write_dataset",
    "impute_missing",
    "flatten",
    "temporal_view",
    "view_columns",
    "synth_generate",
    "informative_temporal_names",
]
