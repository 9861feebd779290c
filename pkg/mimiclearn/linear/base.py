"""Linear model container shared by logistic regression and the linear SVM."""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Tuple

import numpy as np
from scipy.special import expit

from ..models import LinearKind
from ..utils import decode_array, encode_array


@dataclass
class LinearModel:
    """Weights, bias and training record of a linear classifier."""

    weights: np.ndarray
    bias: float
    kind: LinearKind
    l2: float
    converged: bool = True
    grad_norm: float = 0.0
    n_iter: int = 0
    history: List[float] = field(default_factory=list)

    def __post_init__(self):
        self.weights = np.asarray(self.weights, dtype=np.float64)
        self.kind = LinearKind(self.kind)
        self.bias = float(self.bias)

    @property
    def n_features(self) -> int:
        return int(self.weights.shape[0])

    def decision_function(self, x) -> np.ndarray:
        """w^T x + b per row.

        Raises:
            ValueError: If the feature count differs from training
        """
        x = np.asarray(getattr(x, "values", x), dtype=np.float64)
        if x.ndim != 2 or x.shape[1] != self.n_features:
            raise ValueError(f"Expected {self.n_features} features, got shape {x.shape}")
        return x @ self.weights + self.bias

    def predict_scores(self, x) -> np.ndarray:
        """Sigmoid probabilities for logreg, raw margins for the SVM."""
        margins = self.decision_function(x)
        if self.kind == LinearKind.LOGREG:
            return expit(margins)
        return margins

    def to_dict(self) -> Dict[str, Any]:
        return {
            "weights": encode_array(self.weights),
            "bias": self.bias,
            "kind": self.kind.value,
            "l2": self.l2,
            "converged": self.converged,
            "grad_norm": self.grad_norm,
            "n_iter": self.n_iter,
            "history": list(self.history),
        }

    @classmethod
    def from_dict(cls, payload: Dict[str, Any]) -> "LinearModel":
        return cls(
            weights=decode_array(payload["weights"]),
            bias=payload["bias"],
            kind=LinearKind(payload["kind"]),
            l2=float(payload["l2"]),
            converged=bool(payload.get("converged", True)),
            grad_norm=float(payload.get("grad_norm", 0.0)),
            n_iter=int(payload.get("n_iter", 0)),
            history=[float(v) for v in payload.get("history", [])],
        )


def check_linear_inputs(x, y) -> Tuple[np.ndarray, np.ndarray]:
    """Float arrays for a linear fit.

    Raises:
        ValueError: On empty, misaligned or non-finite inputs
    """
    x = np.asarray(getattr(x, "values", x), dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.ndim != 2 or x.shape[0] == 0:
        raise ValueError(f"Expected a non-empty 2-D matrix, got shape {x.shape}")
    if y.shape != (x.shape[0],):
        raise ValueError(f"Got {x.shape[0]} rows but targets of shape {y.shape}")
    if not (np.isfinite(x).all() and np.isfinite(y).all()):
        raise ValueError("Linear model inputs contain missing or non-finite values")
    return x, y
