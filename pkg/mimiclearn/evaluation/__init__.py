"""AUC, cross-validation protocol, benchmark matrix and importance reports."""

from .benchmark import (
    BenchCell,
    BenchmarkReport,
    CellResult,
    DiffEntry,
    build_matrix,
    compute_diffs,
    run_benchmark,
)
from .crossval import CvResult, SkippedFold, cross_validate, fold_partitions
from .importance import FeatureScore, ImportanceReport, aggregate_importance
from .methods import (
    FittedMethod,
    MethodFamily,
    MethodSettings,
    MethodSpec,
    all_method_ids,
    fit_method,
)
from .metrics import auc, auc_pairwise
from .report import benchmark_table, gradcheck_table, importance_table

__all__ = [
    "BenchCell",
    "BenchmarkReport",
    "CellResult",
    "DiffEntry",
    "build_matrix",
    "compute_diffs",
    "run_benchmark",
    "CvResult",
    "SkippedFold",
    "cross_validate",
    "fold_partitions",
    "FeatureScore",
    "ImportanceReport",
    "aggregate_importance",
    "FittedMethod",
    "MethodFamily",
    "MethodSettings",
    "MethodSpec",
    "all_method_ids",
    "fit_method",
    "auc",
    "auc_pairwise",
    "benchmark_table",
    "gradcheck_table",
    "importance_table",
]
