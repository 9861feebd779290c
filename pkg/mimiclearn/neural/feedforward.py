"""Forward and backward passes of a dense stack with a sigmoid prediction head."""

from dataclasses import dataclass
from typing import List

import numpy as np
from scipy.special import expit

from .layers import LayerParams, activation_grad, binary_cross_entropy


@dataclass
class StackCache:
    """Per-layer inputs, pre-activations and activations of one forward pass."""

    inputs: List[np.ndarray]
    pre: List[np.ndarray]
    post: List[np.ndarray]
    top: np.ndarray
    logits: np.ndarray


def encode(layers: List[LayerParams], x: np.ndarray) -> np.ndarray:
    """Activations of the topmost layer of ``layers``."""
    a = x
    for layer in layers:
        _, a = layer.forward(a)
    return a


def forward(layers: List[LayerParams], head: LayerParams, x: np.ndarray) -> StackCache:
    inputs, pre, post = [], [], []
    a = x
    for layer in layers:
        inputs.append(a)
        z, a = layer.forward(a)
        pre.append(z)
        post.append(a)
    logits = (a @ head.weights.T + head.bias)[:, 0]
    return StackCache(inputs=inputs, pre=pre, post=post, top=a, logits=logits)


def loss(layers: List[LayerParams], head: LayerParams, x: np.ndarray, y: np.ndarray) -> float:
    return binary_cross_entropy(forward(layers, head, x).logits, y)


def backward(
    layers: List[LayerParams], head: LayerParams, cache: StackCache, y: np.ndarray
) -> List[np.ndarray]:
    """Gradients of the mean cross-entropy.

    Returns:
        [dW_1, db_1, ..., dW_L, db_L, dW_head, db_head]
    """
    n = y.shape[0]
    dlogits = (expit(cache.logits) - y) / n
    grads_head = [dlogits[None, :] @ cache.top, np.array([dlogits.sum()])]

    grads: List[np.ndarray] = []
    da = np.outer(dlogits, head.weights[0])
    for l in range(len(layers) - 1, -1, -1):
        layer = layers[l]
        dz = da * activation_grad(cache.pre[l], cache.post[l], layer.activation)
        grads = [dz.T @ cache.inputs[l], dz.sum(axis=0)] + grads
        da = dz @ layer.weights
    return grads + grads_head


def parameters(layers: List[LayerParams], head: LayerParams) -> List[np.ndarray]:
    """Parameter arrays in the order :func:`backward` returns gradients."""
    params: List[np.ndarray] = []
    for layer in layers:
        params.extend([layer.weights, layer.bias])
    params.extend([head.weights, head.bias])
    return params
