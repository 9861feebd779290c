"""L2-regularized logistic regression by full-batch gradient descent."""

import logging
from typing import Optional, Tuple

import numpy as np
from scipy.special import expit

from ..models import LinearConfig, LinearKind
from .base import LinearModel, check_linear_inputs

logger = logging.getLogger(__name__)


def logistic_objective(
    x: np.ndarray, y: np.ndarray, weights: np.ndarray, bias: float, l2: float
) -> float:
    """Mean cross-entropy plus (l2 / 2) * ||w||^2; the bias is not penalized."""
    z = x @ weights + bias
    return float(np.mean(np.logaddexp(0.0, z) - y * z) + 0.5 * l2 * weights @ weights)


def lipschitz_constant(x: np.ndarray, l2: float) -> float:
    """Upper bound on the curvature of the objective: ||[X, 1]||_2^2 / (4n) + l2."""
    augmented = np.hstack([x, np.ones((x.shape[0], 1))])
    return 0.25 * np.linalg.norm(augmented, 2) ** 2 / x.shape[0] + l2


def train_logreg(
    x,
    y,
    cfg: Optional[LinearConfig] = None,
    init: Optional[Tuple[np.ndarray, float]] = None,
) -> LinearModel:
    """Fit logistic regression on hard labels or soft targets in [0, 1].

    Gradient descent with step 1/L never increases the objective. Stops
    once the gradient norm drops below ``cfg.tol`` or after ``cfg.max_iter``
    iterations; a non-converged fit is logged and still returned.

    Args:
        x: Design or feature matrix (N x D)
        y: Targets in [0, 1]
        cfg: Linear configuration (l2 defaults to 1e-4)
        init: Optional starting (weights, bias)

    Returns:
        LinearModel with the objective history

    Raises:
        ValueError: On invalid inputs or targets outside [0, 1]
    """
    cfg = cfg or LinearConfig()
    x, y = check_linear_inputs(x, y)
    if y.min() < 0.0 or y.max() > 1.0:
        raise ValueError("Logistic regression targets must lie in [0, 1]")
    l2 = cfg.resolved_l2(LinearKind.LOGREG)
    n = x.shape[0]

    if init is None:
        weights, bias = np.zeros(x.shape[1]), 0.0
    else:
        weights, bias = np.array(init[0], dtype=np.float64), float(init[1])
    step = 1.0 / lipschitz_constant(x, l2)

    history = [logistic_objective(x, y, weights, bias, l2)]
    grad_norm = np.inf
    n_iter = 0
    for n_iter in range(1, cfg.max_iter + 1):
        residual = expit(x @ weights + bias) - y
        grad_w = x.T @ residual / n + l2 * weights
        grad_b = residual.mean()
        grad_norm = float(np.sqrt(grad_w @ grad_w + grad_b**2))
        if grad_norm < cfg.tol:
            n_iter -= 1
            break
        weights = weights - step * grad_w
        bias = bias - step * grad_b
        history.append(logistic_objective(x, y, weights, bias, l2))

    converged = grad_norm < cfg.tol
    if not converged:
        logger.warning(
            f"Logistic regression did not converge in {cfg.max_iter} iterations "
            f"(gradient norm {grad_norm:.3e})"
        )
    else:
        logger.debug(f"Logistic regression converged after {n_iter} iterations")

    return LinearModel(
        weights=weights,
        bias=bias,
        kind=LinearKind.LOGREG,
        l2=l2,
        converged=converged,
        grad_norm=grad_norm,
        n_iter=n_iter,
        history=history,
    )
