"""SGD and RMSprop optimizers."""

from typing import List, Tuple

import numpy as np

from ..models import OptimizerKind


def rmsprop_step(
    param: np.ndarray,
    grad: np.ndarray,
    cache: np.ndarray,
    lr: float,
    decay: float = 0.9,
    eps: float = 1e-8,
) -> Tuple[np.ndarray, np.ndarray]:
    """One RMSprop update.

    cache' = decay * cache + (1 - decay) * grad**2
    param' = param - lr * grad / (sqrt(cache') + eps)

    Returns:
        (param', cache') as new arrays
    """
    cache = decay * cache + (1.0 - decay) * grad**2
    param = param - lr * grad / (np.sqrt(cache) + eps)
    return param, cache


class Optimizer:
    """Updates a fixed list of parameter arrays in place."""

    def __init__(self, params: List[np.ndarray], learning_rate: float):
        self.params = params
        self.learning_rate = learning_rate

    def step(self, grads: List[np.ndarray]) -> None:
        raise NotImplementedError


class SgdOptimizer(Optimizer):
    """Plain gradient descent."""

    def step(self, grads: List[np.ndarray]) -> None:
        for param, grad in zip(self.params, grads):
            param -= self.learning_rate * grad


class RmspropOptimizer(Optimizer):
    """RMSprop with a running mean of squared gradients per parameter."""

    def __init__(
        self,
        params: List[np.ndarray],
        learning_rate: float,
        decay: float = 0.9,
        eps: float = 1e-8,
    ):
        super().__init__(params, learning_rate)
        self.decay = decay
        self.eps = eps
        self.caches = [np.zeros_like(p) for p in params]

    def step(self, grads: List[np.ndarray]) -> None:
        for i, (param, grad) in enumerate(zip(self.params, grads)):
            updated, self.caches[i] = rmsprop_step(
                param, grad, self.caches[i], self.learning_rate, self.decay, self.eps
            )
            param[...] = updated


def make_optimizer(
    kind: OptimizerKind, params: List[np.ndarray], learning_rate: float
) -> Optimizer:
    """Build an optimizer bound to ``params``."""
    if OptimizerKind(kind) == OptimizerKind.RMSPROP:
        return RmspropOptimizer(params, learning_rate)
    return SgdOptimizer(params, learning_rate)
