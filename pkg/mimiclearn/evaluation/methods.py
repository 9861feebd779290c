"""Method ids of the comparison and how each one is fitted and scored."""

from dataclasses import dataclass
from enum import Enum
from typing import Any, List, Optional, Sequence, Union

import numpy as np
from pydantic import BaseModel

from ..distill import MimicModel, distill, teacher_input, train_teacher
from ..linear import LinearModel, train_linsvm, train_logreg
from ..models import (
    LinearConfig,
    StudentKind,
    TeacherKind,
    TeacherSpec,
    TrainConfig,
    TreeConfig,
    TreeKind,
)
from ..neural import NeuralModel, extract_features, predict_soft
from ..trees import GbtEnsemble, Tree, cart_fit, gbt_fit
from ..utils import derive_seed


class MethodFamily(str, Enum):
    """Row groups of the comparison table."""

    BASELINE = "Baseline"
    NN = "NN-based"
    MIMIC = "Mimic"


BASELINE_METHODS = ("SVM", "LR", "DT", "GBT")
TEACHER_NAMES = ("DNN", "SDA", "LSTM", "LR-DNN", "LR-SDA", "LR-LSTM")
STUDENT_PREFIXES = {"GBTmimic": StudentKind.GBT, "DTmimic": StudentKind.DT}


def all_method_ids() -> List[str]:
    """Every method id in table order."""
    mimic = [f"{prefix}-{name}" for prefix in STUDENT_PREFIXES for name in TEACHER_NAMES]
    return list(BASELINE_METHODS) + list(TEACHER_NAMES) + mimic


def _teacher_from_name(name: str) -> TeacherSpec:
    with_lr_head = name.startswith("LR-")
    base = name[3:] if with_lr_head else name
    try:
        kind = TeacherKind(base.lower())
    except ValueError:
        raise ValueError(f"Unknown teacher '{name}'")
    return TeacherSpec(kind=kind, with_lr_head=with_lr_head)


class MethodSpec(BaseModel):
    """A parsed method id."""

    method_id: str
    family: MethodFamily
    teacher: Optional[TeacherSpec] = None
    student_kind: Optional[StudentKind] = None

    @classmethod
    def parse(cls, method_id: str) -> "MethodSpec":
        """Parse ids such as ``SVM``, ``LR-LSTM`` or ``DTmimic-LR-SDA``.

        Raises:
            ValueError: If the id names no known method
        """
        if method_id in BASELINE_METHODS:
            return cls(method_id=method_id, family=MethodFamily.BASELINE)
        if method_id in TEACHER_NAMES:
            teacher = _teacher_from_name(method_id)
            return cls(method_id=method_id, family=MethodFamily.NN, teacher=teacher)
        prefix, _, rest = method_id.partition("-")
        if prefix in STUDENT_PREFIXES and rest in TEACHER_NAMES:
            return cls(
                method_id=method_id,
                family=MethodFamily.MIMIC,
                teacher=_teacher_from_name(rest),
                student_kind=STUDENT_PREFIXES[prefix],
            )
        raise ValueError(
            f"Unknown method '{method_id}'; expected one of {', '.join(all_method_ids())}"
        )


@dataclass
class MethodSettings:
    """Hyperparameters shared by every fold of a method."""

    train: TrainConfig
    tree: TreeConfig
    linear: LinearConfig

    @classmethod
    def defaults(cls) -> "MethodSettings":
        return cls(train=TrainConfig(), tree=TreeConfig(), linear=LinearConfig())


@dataclass
class FittedMethod:
    """A method trained on one fold; ``score`` ranks held-out rows."""

    spec: MethodSpec
    model: Any
    lr_head: Optional[LinearModel] = None

    def score(self, x: np.ndarray, x_ts: Optional[np.ndarray]) -> np.ndarray:
        if self.spec.family == MethodFamily.MIMIC:
            return self.model.predict(x)
        if self.spec.family == MethodFamily.NN:
            inputs = teacher_input(self.spec.teacher, x, x_ts)
            if self.lr_head is not None:
                return self.lr_head.predict_scores(extract_features(self.model, inputs))
            return predict_soft(self.model, inputs)
        if isinstance(self.model, LinearModel):
            return self.model.predict_scores(x)
        return self.model.predict(x)

    @property
    def tree_model(self) -> Optional[Union[Tree, GbtEnsemble]]:
        """The interpretable model, for importance reports."""
        if isinstance(self.model, MimicModel):
            return self.model.student
        if isinstance(self.model, (Tree, GbtEnsemble)):
            return self.model
        return None


def attach_feature_names(model: Union[Tree, GbtEnsemble], names: Sequence[str]) -> None:
    model.feature_names = list(names)
    for stage in getattr(model, "stages", []):
        stage.feature_names = list(names)


def fit_method(
    spec: MethodSpec,
    x: np.ndarray,
    x_ts: Optional[np.ndarray],
    y: np.ndarray,
    settings: MethodSettings,
    seed: int,
    feature_names: Optional[Sequence[str]] = None,
) -> FittedMethod:
    """Train ``spec`` on one training fold with seeds derived from ``seed``."""
    train_cfg = settings.train.model_copy(update={"seed": derive_seed(seed, "teacher")})
    tree_cfg = settings.tree.model_copy(update={"seed": derive_seed(seed, "tree")})
    names = list(feature_names) if feature_names is not None else None

    if spec.family == MethodFamily.BASELINE:
        if spec.method_id == "SVM":
            return FittedMethod(spec, train_linsvm(x, y, settings.linear))
        if spec.method_id == "LR":
            return FittedMethod(spec, train_logreg(x, y, settings.linear))
        if spec.method_id == "DT":
            dt_cfg = tree_cfg.model_copy(update={"max_depth": None})
            return FittedMethod(spec, cart_fit(x, y, dt_cfg, TreeKind.CLASSIFIER_GINI, names))
        return FittedMethod(spec, gbt_fit(x, y, tree_cfg, feature_names=names))

    teacher = spec.teacher.model_copy(update={"train_config": train_cfg})
    if spec.family == MethodFamily.NN:
        model: NeuralModel = train_teacher(teacher, x, x_ts, y)
        lr_head = None
        if teacher.with_lr_head:
            features = extract_features(model, teacher_input(teacher, x, x_ts))
            lr_head = train_logreg(features, y, settings.linear)
        return FittedMethod(spec, model, lr_head)

    mimic = distill(x, x_ts, y, teacher, tree_cfg, spec.student_kind, linear_cfg=settings.linear)
    if names is not None:
        attach_feature_names(mimic.student, names)
    return FittedMethod(spec, mimic)
