"""How closely a student reproduces its teacher's soft scores."""

import logging

import numpy as np
from pydantic import BaseModel
from scipy import stats

logger = logging.getLogger(__name__)


class FidelityReport(BaseModel):
    """Agreement between student predictions and teacher scores."""

    n_rows: int
    mse: float
    pearson_r: float
    rank_agreement: float


def _is_constant(values: np.ndarray) -> bool:
    return bool(np.ptp(values) == 0.0)


def fidelity_metrics(student: np.ndarray, teacher: np.ndarray, clamp: bool = True) -> FidelityReport:
    """MSE, Pearson r and Kendall tau between student and teacher scores.

    Student predictions are clamped to [0, 1] first when ``clamp`` is set.
    Correlations of a constant vector are reported as 0.0.

    Raises:
        ValueError: With fewer than 2 rows or misaligned vectors
    """
    student = np.asarray(student, dtype=np.float64)
    teacher = np.asarray(teacher, dtype=np.float64)
    if student.shape != teacher.shape or student.ndim != 1:
        raise ValueError(f"Score vectors do not align: {student.shape} vs {teacher.shape}")
    if student.shape[0] < 2:
        raise ValueError("Fidelity needs at least 2 evaluation rows")
    if clamp:
        student = np.clip(student, 0.0, 1.0)

    mse = float(np.mean((student - teacher) ** 2))
    if _is_constant(student) or _is_constant(teacher):
        logger.warning("Constant score vector; correlations reported as 0.0")
        pearson, tau = 0.0, 0.0
    else:
        pearson = float(stats.pearsonr(student, teacher)[0])
        tau = float(stats.kendalltau(student, teacher)[0])
    return FidelityReport(n_rows=student.shape[0], mse=mse, pearson_r=pearson, rank_agreement=tau)


def fidelity_report(mimic, teacher_scores: np.ndarray, x_eval) -> FidelityReport:
    """Fidelity of ``mimic``'s student on ``x_eval`` against aligned teacher scores."""
    return fidelity_metrics(mimic.predict(x_eval), teacher_scores)
