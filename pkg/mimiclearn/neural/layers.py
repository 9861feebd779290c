"""Dense layers, activations, initialization and input standardization."""

from dataclasses import dataclass
from typing import Any, Dict, Optional, Tuple

import numpy as np
from scipy.special import expit

from ..models import Activation
from ..utils import decode_array, encode_array


def activate(z: np.ndarray, activation: Activation) -> np.ndarray:
    """Apply an activation elementwise."""
    if activation == Activation.SIGMOID:
        return expit(z)
    if activation == Activation.TANH:
        return np.tanh(z)
    if activation == Activation.RELU:
        return np.maximum(z, 0.0)
    return z


def activation_grad(z: np.ndarray, a: np.ndarray, activation: Activation) -> np.ndarray:
    """Derivative of the activation at pre-activation ``z`` (output ``a``)."""
    if activation == Activation.SIGMOID:
        return a * (1.0 - a)
    if activation == Activation.TANH:
        return 1.0 - a**2
    if activation == Activation.RELU:
        return (z > 0.0).astype(np.float64)
    return np.ones_like(z)


def glorot_uniform(rng: np.random.Generator, fan_in: int, fan_out: int) -> np.ndarray:
    """Uniform init in +-sqrt(6 / (fan_in + fan_out)), shape (fan_out, fan_in)."""
    limit = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-limit, limit, size=(fan_out, fan_in))


@dataclass
class LayerParams:
    """Weights (fan_out x fan_in), bias (fan_out) and activation of a layer."""

    weights: np.ndarray
    bias: np.ndarray
    activation: Activation = Activation.SIGMOID

    @classmethod
    def initialize(
        cls, rng: np.random.Generator, fan_in: int, fan_out: int, activation: Activation
    ) -> "LayerParams":
        return cls(
            weights=glorot_uniform(rng, fan_in, fan_out),
            bias=np.zeros(fan_out),
            activation=Activation(activation),
        )

    @property
    def fan_in(self) -> int:
        return int(self.weights.shape[1])

    @property
    def fan_out(self) -> int:
        return int(self.weights.shape[0])

    def forward(self, x: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """Return (pre-activation, activation) for row inputs ``x``."""
        if x.shape[-1] != self.fan_in:
            raise ValueError(f"Layer expects {self.fan_in} inputs, got {x.shape[-1]}")
        z = x @ self.weights.T + self.bias
        return z, activate(z, self.activation)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "weights": encode_array(self.weights),
            "bias": encode_array(self.bias),
            "activation": self.activation.value,
        }

    @classmethod
    def from_dict(cls, payload: Dict[str, Any]) -> "LayerParams":
        return cls(
            weights=decode_array(payload["weights"]),
            bias=decode_array(payload["bias"]),
            activation=Activation(payload["activation"]),
        )


@dataclass
class Standardizer:
    """Per-feature centering and scaling fitted on training rows.

    Constant features keep scale 1 so they map to 0.
    """

    mean: np.ndarray
    scale: np.ndarray

    @classmethod
    def fit(cls, x: np.ndarray, axis: Tuple[int, ...] = (0,)) -> "Standardizer":
        mean = x.mean(axis=axis)
        scale = x.std(axis=axis)
        scale = np.where(scale > 0.0, scale, 1.0)
        return cls(mean=mean, scale=scale)

    @classmethod
    def identity(cls, width: int) -> "Standardizer":
        return cls(mean=np.zeros(width), scale=np.ones(width))

    def transform(self, x: np.ndarray) -> np.ndarray:
        if x.shape[-1] != self.mean.shape[0]:
            raise ValueError(f"Expected {self.mean.shape[0]} features, got {x.shape[-1]}")
        return (x - self.mean) / self.scale

    def to_dict(self) -> Dict[str, Any]:
        return {"mean": encode_array(self.mean), "scale": encode_array(self.scale)}

    @classmethod
    def from_dict(cls, payload: Optional[Dict[str, Any]]) -> "Standardizer":
        return cls(mean=decode_array(payload["mean"]), scale=decode_array(payload["scale"]))


def binary_cross_entropy(logits: np.ndarray, y: np.ndarray) -> float:
    """Mean binary cross-entropy computed from logits (numerically stable)."""
    return float(np.mean(np.logaddexp(0.0, logits) - y * logits))
