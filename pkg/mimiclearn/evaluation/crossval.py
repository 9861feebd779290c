"""Repeated k-fold cross-validation of one method on one task and view."""

import logging
from typing import Any, List, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from ..data import Dataset, flatten, temporal_view
from ..models import FeatureView, Task
from ..utils import derive_seed
from .methods import MethodSettings, MethodSpec, fit_method
from .metrics import auc

logger = logging.getLogger(__name__)


class SkippedFold(BaseModel):
    """A test fold whose labels hold a single class."""

    trial: int
    fold: int
    reason: str


class CvResult(BaseModel):
    """Held-out AUCs of every (trial, fold) pair that could be scored."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    method_id: str
    task: Task
    feature_view: FeatureView
    fold_aucs: List[float] = Field(default_factory=list)
    skipped_folds: List[SkippedFold] = Field(default_factory=list)
    auc_mean: Optional[float] = None
    auc_std: Optional[float] = None
    fold_models: List[Any] = Field(default_factory=list, exclude=True)


def fold_partitions(n_samples: int, trials: int, folds: int, seed: int) -> List[List[np.ndarray]]:
    """Test-fold indices per trial; each trial is a fresh seeded shuffle.

    Raises:
        ValueError: If there are fewer samples than folds
    """
    if folds < 2 or folds > n_samples:
        raise ValueError(f"folds must be between 2 and {n_samples}, got {folds}")
    partitions = []
    for trial in range(trials):
        rng = np.random.default_rng(derive_seed(seed, "trial", trial))
        partitions.append(np.array_split(rng.permutation(n_samples), folds))
    return partitions


def summarize(aucs: List[float]):
    """Mean and sample standard deviation (None when undefined)."""
    if not aucs:
        return None, None
    mean = float(np.mean(aucs))
    std = float(np.std(aucs, ddof=1)) if len(aucs) > 1 else 0.0
    return mean, std


def cross_validate(
    method: Union[str, MethodSpec],
    dataset: Dataset,
    task: Task,
    feature_view: FeatureView = FeatureView.ALL,
    trials: int = 5,
    folds: int = 5,
    seed: int = 0,
    settings: Optional[MethodSettings] = None,
    keep_models: bool = False,
) -> CvResult:
    """Run ``trials`` x ``folds`` cross-validation.

    Every model, including a mimic pipeline's teacher, LR head and student,
    is trained inside the training folds only. Folds whose test labels hold
    a single class are skipped and recorded.

    Args:
        method: Method id or parsed spec
        dataset: Imputed dataset
        task: Label channel to predict
        feature_view: Column subset
        trials: Number of reshuffles
        folds: Folds per trial
        seed: Root seed; partitions depend on (seed, trial) only, so all
            methods see the same folds
        settings: Hyperparameters (defaults when omitted)
        keep_models: Keep each fold's fitted model on the result

    Returns:
        CvResult with the pooled mean and sample standard deviation

    Raises:
        ValueError: If the dataset is not imputed or the method is unknown
    """
    spec = method if isinstance(method, MethodSpec) else MethodSpec.parse(method)
    task, feature_view = Task(task), FeatureView(feature_view)
    settings = settings or MethodSettings.defaults()
    if not dataset.is_imputed:
        raise ValueError("cross_validate needs an imputed dataset")

    design = flatten(dataset, feature_view)
    x = design.values
    x_ts = temporal_view(dataset, feature_view)
    y = dataset.labels[task]

    result = CvResult(method_id=spec.method_id, task=task, feature_view=feature_view)
    for trial, test_folds in enumerate(fold_partitions(x.shape[0], trials, folds, seed)):
        for fold, test in enumerate(test_folds):
            if np.unique(y[test]).size < 2:
                logger.warning(
                    f"{spec.method_id}/{feature_view.value}/{task.value}: skipping trial {trial} "
                    f"fold {fold}, test labels hold a single class"
                )
                result.skipped_folds.append(
                    SkippedFold(trial=trial, fold=fold, reason="single-class test labels")
                )
                continue
            train = np.setdiff1d(np.arange(x.shape[0]), test)
            fold_seed = derive_seed(seed, spec.method_id, feature_view.value, task.value, trial, fold)
            fitted = fit_method(
                spec, x[train], x_ts[train], y[train], settings, fold_seed, design.column_names
            )
            score = auc(fitted.score(x[test], x_ts[test]), y[test])
            result.fold_aucs.append(score)
            if keep_models:
                result.fold_models.append(fitted)
            logger.debug(f"{spec.method_id} trial {trial} fold {fold}: AUC {score:.4f}")

    result.auc_mean, result.auc_std = summarize(result.fold_aucs)
    if result.auc_mean is not None:
        logger.info(
            f"{spec.method_id} [{feature_view.value}, {task.value}]: "
            f"AUC {result.auc_mean:.4f} +- {result.auc_std:.4f} over {len(result.fold_aucs)} folds"
        )
    return result
