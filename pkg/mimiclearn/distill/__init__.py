"""Mimic-learning pipelines and student/teacher fidelity."""

from .fidelity import FidelityReport, fidelity_metrics, fidelity_report
from .pipeline import (
    MimicModel,
    TEACHER_TYPES,
    distill,
    distill_pipeline1,
    distill_pipeline2,
    fit_student,
    teacher_input,
    teacher_scores,
    train_teacher,
)

__all__ = [
    "FidelityReport",
    "fidelity_metrics",
    "fidelity_report",
    "MimicModel",
    "TEACHER_TYPES",
    "distill",
    "distill_pipeline1",
    "distill_pipeline2",
    "fit_student",
    "teacher_input",
    "teacher_scores",
    "train_teacher",
]
