"""Benchmark matrix: cross-validation of every (method, view, task) cell."""

import json
import logging
from concurrent.futures import ThreadPoolExecutor, as_completed
from typing import Any, Callable, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field

from ..data import Dataset, flatten
from ..models import BenchConfig, FeatureView, Task
from .crossval import SkippedFold, cross_validate
from .importance import FeatureScore, aggregate_importance
from .methods import MethodFamily, MethodSettings, MethodSpec

logger = logging.getLogger(__name__)

VIEW_DIFFS = [
    (FeatureView.ALL, FeatureView.TEMPORAL_ONLY),
    (FeatureView.ALL, FeatureView.STATIC_PLUS_DAY0),
    (FeatureView.TEMPORAL_ONLY, FeatureView.STATIC_PLUS_DAY0),
]


class BenchCell(BaseModel):
    method: str
    view: FeatureView
    task: Task


class CellResult(BaseModel):
    """Outcome of one cell; failed cells keep the error instead of AUCs."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    method: str
    family: MethodFamily
    view: FeatureView
    task: Task
    status: str = "ok"
    error: Optional[str] = None
    auc_mean: Optional[float] = None
    auc_std: Optional[float] = None
    fold_aucs: List[float] = Field(default_factory=list)
    skipped_folds: List[SkippedFold] = Field(default_factory=list)
    top_features: List[FeatureScore] = Field(default_factory=list)
    fold_models: List[Any] = Field(default_factory=list, exclude=True)


class DiffEntry(BaseModel):
    """``left - right`` mean AUC for a pair of cells."""

    kind: str
    method: str
    task: Task
    left: str
    right: str
    diff: float


class BenchmarkReport(BaseModel):
    config_echo: Dict[str, Any] = Field(default_factory=dict)
    cells: List[CellResult] = Field(default_factory=list)
    diffs: List[DiffEntry] = Field(default_factory=list)

    def to_json(self, indent: int = 2) -> str:
        """Byte-stable JSON (sorted keys)."""
        return json.dumps(self.model_dump(mode="json"), indent=indent, sort_keys=True)

    def cell(self, method: str, view: FeatureView, task: Task) -> Optional[CellResult]:
        for cell in self.cells:
            if cell.method == method and cell.view == view and cell.task == task:
                return cell
        return None


def build_matrix(cfg: BenchConfig) -> List[BenchCell]:
    """Cells in method, view, task order.

    Raises:
        ValueError: If a method id is unknown
    """
    for method in cfg.methods:
        MethodSpec.parse(method)
    return [
        BenchCell(method=method, view=view, task=task)
        for method in cfg.methods
        for view in cfg.views
        for task in cfg.tasks
    ]


def compute_diffs(cells: List[CellResult]) -> List[DiffEntry]:
    """View ablation diffs per method/task and GBTmimic - DTmimic per teacher."""
    means = {
        (c.method, c.view, c.task): c.auc_mean
        for c in cells
        if c.status == "ok" and c.auc_mean is not None
    }
    diffs = []
    seen = set()
    for c in cells:
        if (c.method, c.task) in seen:
            continue
        seen.add((c.method, c.task))
        for left, right in VIEW_DIFFS:
            a = means.get((c.method, left, c.task))
            b = means.get((c.method, right, c.task))
            if a is not None and b is not None:
                diffs.append(
                    DiffEntry(
                        kind="view",
                        method=c.method,
                        task=c.task,
                        left=left.value,
                        right=right.value,
                        diff=a - b,
                    )
                )

    for (method, view, task), mean in means.items():
        if not method.startswith("GBTmimic-"):
            continue
        teacher = method[len("GBTmimic-") :]
        other = means.get((f"DTmimic-{teacher}", view, task))
        if other is not None:
            diffs.append(
                DiffEntry(
                    kind="student",
                    method=teacher,
                    task=task,
                    left=f"{method} ({view.value})",
                    right=f"DTmimic-{teacher} ({view.value})",
                    diff=mean - other,
                )
            )
    return diffs


def _run_cell(
    cell: BenchCell,
    dataset: Dataset,
    cfg: BenchConfig,
    settings: MethodSettings,
    keep_models: bool,
) -> CellResult:
    spec = MethodSpec.parse(cell.method)
    keep = keep_models or cfg.top_k > 0
    try:
        cv = cross_validate(
            spec,
            dataset,
            cell.task,
            cell.view,
            trials=cfg.trials,
            folds=cfg.folds,
            seed=cfg.seed,
            settings=settings,
            keep_models=keep,
        )
    except Exception as e:
        logger.error(f"Cell {cell.method}/{cell.view.value}/{cell.task.value} failed: {e}")
        return CellResult(
            method=cell.method,
            family=spec.family,
            view=cell.view,
            task=cell.task,
            status="failed",
            error=f"{type(e).__name__}: {e}",
        )

    result = CellResult(
        method=cell.method,
        family=spec.family,
        view=cell.view,
        task=cell.task,
        auc_mean=cv.auc_mean,
        auc_std=cv.auc_std,
        fold_aucs=cv.fold_aucs,
        skipped_folds=cv.skipped_folds,
        fold_models=cv.fold_models if keep_models else [],
    )
    trees = [m.tree_model for m in cv.fold_models if m.tree_model is not None]
    if cfg.top_k > 0 and trees:
        names = flatten(dataset, cell.view).column_names
        result.top_features = aggregate_importance(trees, names, cfg.top_k).top_k
    return result


def run_benchmark(
    dataset: Dataset,
    cfg: Optional[BenchConfig] = None,
    matrix: Optional[List[BenchCell]] = None,
    keep_models: bool = False,
    on_cell_done: Optional[Callable[[CellResult], None]] = None,
) -> BenchmarkReport:
    """Cross-validate every cell, possibly in parallel.

    Each cell derives its seeds from ``cfg.seed`` and its own identity, so
    the report does not depend on ``cfg.max_workers``, which is left out
    of the config echo. A failing cell is marked and the rest of the
    matrix still runs.

    Args:
        dataset: Imputed dataset
        cfg: Matrix and protocol settings
        matrix: Explicit cells (defaults to the product in ``cfg``)
        keep_models: Keep fold models on the cells
        on_cell_done: Progress callback

    Returns:
        BenchmarkReport with cells in matrix order plus diffs
    """
    cfg = cfg or BenchConfig()
    matrix = matrix if matrix is not None else build_matrix(cfg)
    settings = MethodSettings(train=cfg.train, tree=cfg.tree, linear=cfg.linear)
    results: Dict[int, CellResult] = {}

    with ThreadPoolExecutor(max_workers=cfg.max_workers) as executor:
        futures = {
            executor.submit(_run_cell, cell, dataset, cfg, settings, keep_models): i
            for i, cell in enumerate(matrix)
        }
        for future in as_completed(futures):
            result = future.result()
            results[futures[future]] = result
            if on_cell_done is not None:
                on_cell_done(result)

    cells = [results[i] for i in range(len(matrix))]
    failed = sum(1 for c in cells if c.status != "ok")
    if failed:
        logger.warning(f"{failed} of {len(cells)} benchmark cells failed")
    return BenchmarkReport(
        config_echo=cfg.model_dump(mode="json", exclude={"max_workers"}),
        cells=cells,
        diffs=compute_diffs(cells),
    )
