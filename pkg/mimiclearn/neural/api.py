"""Common interface of the neural teachers."""

from abc import ABC, abstractmethod
from typing import Any, ClassVar, Dict, List, Tuple

import numpy as np

from ..models import TeacherKind


class NeuralModel(ABC):
    """A trained teacher: hidden features, soft scores and its own gradients."""

    kind: ClassVar[TeacherKind]

    @abstractmethod
    def named_parameters(self) -> List[Tuple[str, np.ndarray]]:
        """Parameter arrays (live references) in gradient order."""

    def parameters(self) -> List[np.ndarray]:
        return [array for _, array in self.named_parameters()]

    @abstractmethod
    def extract_features(self, x: np.ndarray) -> np.ndarray:
        """Activations the Pipeline-1 classifier is trained on."""

    @abstractmethod
    def predict_soft(self, x: np.ndarray) -> np.ndarray:
        """Sigmoid output of the prediction layer, one score per row."""

    @abstractmethod
    def loss_and_grads(self, x: np.ndarray, y: np.ndarray) -> Tuple[float, List[np.ndarray]]:
        """Mean cross-entropy on ``(x, y)`` and its gradients w.r.t. :meth:`parameters`."""

    @abstractmethod
    def to_dict(self) -> Dict[str, Any]:
        """JSON-ready payload; :meth:`from_dict` restores it bitwise."""

    @classmethod
    @abstractmethod
    def from_dict(cls, payload: Dict[str, Any]) -> "NeuralModel": ...


def extract_features(model: NeuralModel, x: np.ndarray) -> np.ndarray:
    """Hidden features of ``x``.

    MLP and SDA return the topmost hidden layer (N x width); the LSTM
    returns the flattened sequence output (N x T*H).

    Raises:
        ValueError: If ``x`` does not match the model's input shape
    """
    return model.extract_features(x)


def predict_soft(model: NeuralModel, x: np.ndarray) -> np.ndarray:
    """Soft prediction scores in (0, 1)."""
    return model.predict_soft(x)
