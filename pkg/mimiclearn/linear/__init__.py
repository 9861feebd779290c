"""Linear baselines: logistic regression and linear SVM."""

from .base import LinearModel
from .logreg import logistic_objective, train_logreg
from .svm import hinge_objective, train_linsvm

__all__ = [
    "LinearModel",
    "logistic_objective",
    "train_logreg",
    "hinge_objective",
    "train_linsvm",
]
