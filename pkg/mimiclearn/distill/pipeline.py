"""Mimic-learning pipelines: teacher -> soft targets -> interpretable student."""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Sequence, Type, Union

import numpy as np

from ..linear import LinearModel, train_logreg
from ..models import (
    LinearConfig,
    Pipeline,
    StudentKind,
    TeacherKind,
    TeacherSpec,
    TreeConfig,
    TreeKind,
)
from ..neural import (
    LstmModel,
    MlpModel,
    NeuralModel,
    SdaModel,
    extract_features,
    predict_soft,
    train_lstm,
    train_mlp,
    train_sda,
)
from ..trees import GbtEnsemble, Tree, cart_fit, gbt_fit

logger = logging.getLogger(__name__)

Student = Union[GbtEnsemble, Tree]

TEACHER_TYPES: Dict[TeacherKind, Type[NeuralModel]] = {
    TeacherKind.DNN: MlpModel,
    TeacherKind.SDA: SdaModel,
    TeacherKind.LSTM: LstmModel,
}


def teacher_input(spec: TeacherSpec, x, x_ts):
    """The LSTM reads only the temporal tensor; the feedforward teachers read X.

    Raises:
        ValueError: If an LSTM teacher is given no temporal tensor
    """
    if spec.kind == TeacherKind.LSTM:
        if x_ts is None:
            raise ValueError("LSTM teachers need the temporal tensor")
        return x_ts
    return x


def train_teacher(spec: TeacherSpec, x, x_ts, y) -> NeuralModel:
    """Train the network named by ``spec`` on its own view of the rows."""
    inputs = teacher_input(spec, x, x_ts)
    if spec.kind == TeacherKind.DNN:
        return train_mlp(inputs, y, spec.train_config)
    if spec.kind == TeacherKind.SDA:
        return train_sda(inputs, y, spec.train_config)
    return train_lstm(inputs, y, spec.train_config)


def fit_student(
    x,
    soft_targets: np.ndarray,
    cfg: Optional[TreeConfig] = None,
    kind: StudentKind = StudentKind.GBT,
    feature_names: Optional[Sequence[str]] = None,
) -> Student:
    """Regress the raw design matrix on soft targets.

    ``gbt`` boosts depth-limited trees; ``dt`` grows one regression tree
    until its leaves are pure.
    """
    cfg = cfg or TreeConfig()
    names = feature_names if feature_names is not None else getattr(x, "column_names", None)
    if StudentKind(kind) == StudentKind.GBT:
        return gbt_fit(x, soft_targets, cfg, feature_names=names)
    return cart_fit(
        x,
        soft_targets,
        cfg.model_copy(update={"max_depth": None}),
        TreeKind.REGRESSOR_MSE,
        feature_names=names,
    )


def _student_to_dict(student: Student) -> Dict[str, Any]:
    kind = "gbt" if isinstance(student, GbtEnsemble) else "tree"
    return {"type": kind, "model": student.to_dict()}


def _student_from_dict(payload: Dict[str, Any]) -> Student:
    if payload["type"] == "gbt":
        return GbtEnsemble.from_dict(payload["model"])
    return Tree.from_dict(payload["model"])


@dataclass
class MimicModel:
    """A student plus the provenance of the soft targets it was fitted on."""

    student: Student
    teacher: TeacherSpec
    pipeline: Pipeline
    student_kind: StudentKind
    student_config: TreeConfig
    soft_target_stats: Dict[str, float] = field(default_factory=dict)
    teacher_model: Optional[NeuralModel] = field(default=None, repr=False)
    lr_head: Optional[LinearModel] = field(default=None, repr=False)

    def __post_init__(self):
        self.pipeline = Pipeline(self.pipeline)
        self.student_kind = StudentKind(self.student_kind)
        if (self.pipeline == Pipeline.P1) != self.teacher.with_lr_head:
            raise ValueError(
                f"Pipeline {self.pipeline.value} does not match teacher {self.teacher.name}"
            )

    @property
    def method_id(self) -> str:
        prefix = "GBTmimic" if self.student_kind == StudentKind.GBT else "DTmimic"
        return f"{prefix}-{self.teacher.name}"

    @property
    def seeds(self) -> Dict[str, int]:
        return {"teacher": self.teacher.train_config.seed, "student": self.student_config.seed}

    def predict(self, x) -> np.ndarray:
        """Raw student predictions (unclamped)."""
        return self.student.predict(getattr(x, "values", x))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "method_id": self.method_id,
            "pipeline": self.pipeline.value,
            "student_kind": self.student_kind.value,
            "teacher": self.teacher.model_dump(mode="json"),
            "student_config": self.student_config.model_dump(mode="json"),
            "seeds": self.seeds,
            "soft_target_stats": dict(self.soft_target_stats),
            "student": _student_to_dict(self.student),
            "teacher_model": self.teacher_model.to_dict() if self.teacher_model else None,
            "lr_head": self.lr_head.to_dict() if self.lr_head else None,
        }

    @classmethod
    def from_dict(cls, payload: Dict[str, Any]) -> "MimicModel":
        teacher = TeacherSpec.model_validate(payload["teacher"])
        teacher_model = None
        if payload.get("teacher_model") is not None:
            teacher_model = TEACHER_TYPES[teacher.kind].from_dict(payload["teacher_model"])
        lr_head = None
        if payload.get("lr_head") is not None:
            lr_head = LinearModel.from_dict(payload["lr_head"])
        return cls(
            student=_student_from_dict(payload["student"]),
            teacher=teacher,
            pipeline=Pipeline(payload["pipeline"]),
            student_kind=StudentKind(payload["student_kind"]),
            student_config=TreeConfig.model_validate(payload["student_config"]),
            soft_target_stats={k: float(v) for k, v in payload["soft_target_stats"].items()},
            teacher_model=teacher_model,
            lr_head=lr_head,
        )


def teacher_scores(mimic: MimicModel, x, x_ts=None) -> np.ndarray:
    """Soft targets the teacher side produces for arbitrary rows.

    Pipeline 1 returns the LR head's scores on the teacher's hidden
    features; Pipeline 2 returns the teacher's own soft predictions.

    Raises:
        ValueError: If the teacher model is not attached
    """
    if mimic.teacher_model is None:
        raise ValueError(f"{mimic.method_id} carries no teacher model")
    inputs = teacher_input(mimic.teacher, x, x_ts)
    if mimic.pipeline == Pipeline.P1:
        if mimic.lr_head is None:
            raise ValueError(f"{mimic.method_id} carries no logistic regression head")
        return mimic.lr_head.predict_scores(extract_features(mimic.teacher_model, inputs))
    return predict_soft(mimic.teacher_model, inputs)


def _target_stats(targets: np.ndarray) -> Dict[str, float]:
    return {
        "min": float(targets.min()),
        "max": float(targets.max()),
        "mean": float(targets.mean()),
    }


def _distill(
    pipeline: Pipeline,
    x,
    x_ts,
    y,
    teacher: TeacherSpec,
    student_cfg: Optional[TreeConfig],
    student_kind: StudentKind,
    teacher_model: Optional[NeuralModel],
    linear_cfg: Optional[LinearConfig],
) -> MimicModel:
    student_cfg = student_cfg or TreeConfig()
    y = np.asarray(y, dtype=np.float64)
    if teacher_model is None:
        teacher_model = train_teacher(teacher, x, x_ts, y)
    elif teacher_model.kind != teacher.kind:
        raise ValueError(
            f"Pre-trained {teacher_model.kind.value} model does not match teacher {teacher.kind.value}"
        )

    inputs = teacher_input(teacher, x, x_ts)
    lr_head = None
    if pipeline == Pipeline.P1:
        features = extract_features(teacher_model, inputs)
        lr_head = train_logreg(features, y, linear_cfg)
        targets = lr_head.predict_scores(features)
    else:
        targets = predict_soft(teacher_model, inputs)

    student = fit_student(x, targets, student_cfg, student_kind)
    mimic = MimicModel(
        student=student,
        teacher=teacher,
        pipeline=pipeline,
        student_kind=student_kind,
        student_config=student_cfg,
        soft_target_stats=_target_stats(targets),
        teacher_model=teacher_model,
        lr_head=lr_head,
    )
    logger.info(
        f"Distilled {mimic.method_id}: soft targets in "
        f"[{targets.min():.4f}, {targets.max():.4f}], mean {targets.mean():.4f}"
    )
    return mimic


def distill_pipeline1(
    x,
    x_ts,
    y,
    teacher: TeacherSpec,
    student_cfg: Optional[TreeConfig] = None,
    student_kind: StudentKind = StudentKind.GBT,
    teacher_model: Optional[NeuralModel] = None,
    linear_cfg: Optional[LinearConfig] = None,
) -> MimicModel:
    """Teacher hidden features -> logistic regression soft scores -> student.

    Args:
        x: Design matrix the student is fitted on
        x_ts: Temporal tensor (needed by LSTM teachers)
        y: Binary labels; only the teacher and the LR head see them
        teacher: Teacher spec with ``with_lr_head=True``
        student_cfg: Student tree settings
        student_kind: ``gbt`` or ``dt``
        teacher_model: Already trained teacher to reuse
        linear_cfg: Settings of the LR head

    Returns:
        MimicModel with the teacher and LR head attached

    Raises:
        ValueError: If the teacher spec lacks the LR head
    """
    if not teacher.with_lr_head:
        raise ValueError(f"Pipeline 1 needs an LR-* teacher, got {teacher.name}")
    return _distill(
        Pipeline.P1, x, x_ts, y, teacher, student_cfg, StudentKind(student_kind), teacher_model, linear_cfg
    )


def distill_pipeline2(
    x,
    x_ts,
    y,
    teacher: TeacherSpec,
    student_cfg: Optional[TreeConfig] = None,
    student_kind: StudentKind = StudentKind.GBT,
    teacher_model: Optional[NeuralModel] = None,
) -> MimicModel:
    """Teacher soft predictions -> student.

    Raises:
        ValueError: If the teacher spec carries an LR head
    """
    if teacher.with_lr_head:
        raise ValueError(f"Pipeline 2 takes a plain teacher, got {teacher.name}")
    return _distill(
        Pipeline.P2, x, x_ts, y, teacher, student_cfg, StudentKind(student_kind), teacher_model, None
    )


def distill(
    x,
    x_ts,
    y,
    teacher: TeacherSpec,
    student_cfg: Optional[TreeConfig] = None,
    student_kind: StudentKind = StudentKind.GBT,
    teacher_model: Optional[NeuralModel] = None,
    linear_cfg: Optional[LinearConfig] = None,
) -> MimicModel:
    """Run the pipeline implied by the teacher spec (LR-* -> p1, else p2)."""
    if teacher.with_lr_head:
        return distill_pipeline1(
            x, x_ts, y, teacher, student_cfg, student_kind, teacher_model, linear_cfg
        )
    return distill_pipeline2(x, x_ts, y, teacher, student_cfg, student_kind, teacher_model)
