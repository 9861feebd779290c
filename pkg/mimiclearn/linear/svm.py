"""Linear SVM by subgradient descent on the regularized hinge loss."""

import logging
from typing import Optional

import numpy as np

from ..models import LinearConfig, LinearKind
from .base import LinearModel, check_linear_inputs

logger = logging.getLogger(__name__)

STALL_WINDOW = 200


def hinge_objective(
    x: np.ndarray, signs: np.ndarray, weights: np.ndarray, bias: float, l2: float
) -> float:
    """Mean hinge loss plus (l2 / 2) * ||w||^2 for labels in {-1, +1}."""
    margins = signs * (x @ weights + bias)
    return float(np.mean(np.maximum(0.0, 1.0 - margins)) + 0.5 * l2 * weights @ weights)


def train_linsvm(x, y, cfg: Optional[LinearConfig] = None) -> LinearModel:
    """Fit a linear SVM; decision margins (not probabilities) are its scores.

    The step at iteration ``n_iter`` (counted from 1) is
    ``svm_step / sqrt(n_iter)``. Subgradient steps are not monotone, so the
    iterate with the lowest objective is returned.
    The fit counts as converged when the subgradient vanishes or the best
    objective has not improved by ``cfg.tol`` for a stall window.

    Args:
        x: Design matrix (N x D)
        y: Binary labels
        cfg: Linear configuration (l2 defaults to 1e-2)

    Returns:
        LinearModel holding the best iterate

    Raises:
        ValueError: On invalid inputs or non-binary labels
    """
    cfg = cfg or LinearConfig()
    x, y = check_linear_inputs(x, y)
    if not np.isin(y, (0.0, 1.0)).all():
        raise ValueError("Linear SVM labels must be 0 or 1")
    l2 = cfg.resolved_l2(LinearKind.LINSVM)
    signs = 2.0 * y - 1.0
    n = x.shape[0]

    weights, bias = np.zeros(x.shape[1]), 0.0
    best = (weights.copy(), bias, hinge_objective(x, signs, weights, bias, l2))
    history = [best[2]]
    grad_norm = np.inf
    last_improvement = 0
    converged = False
    n_iter = 0

    for n_iter in range(1, cfg.max_iter + 1):
        active = signs * (x @ weights + bias) < 1.0
        grad_w = l2 * weights - (signs[active] @ x[active]) / n
        grad_b = -signs[active].sum() / n
        grad_norm = float(np.sqrt(grad_w @ grad_w + grad_b**2))
        if grad_norm < cfg.tol:
            converged = True
            break

        step = cfg.svm_step / np.sqrt(n_iter)
        weights = weights - step * grad_w
        bias = bias - step * grad_b
        objective = hinge_objective(x, signs, weights, bias, l2)
        history.append(objective)
        if objective < best[2] - cfg.tol:
            last_improvement = n_iter
        if objective < best[2]:
            best = (weights.copy(), bias, objective)
        if n_iter - last_improvement >= STALL_WINDOW:
            converged = True
            break

    if not converged:
        logger.warning(
            f"Linear SVM still improving after {cfg.max_iter} iterations "
            f"(subgradient norm {grad_norm:.3e})"
        )
    logger.debug(f"Linear SVM stopped after {n_iter} iterations, objective {best[2]:.6f}")

    return LinearModel(
        weights=best[0],
        bias=best[1],
        kind=LinearKind.LINSVM,
        l2=l2,
        converged=converged,
        grad_norm=grad_norm,
        n_iter=n_iter,
        history=history,
    )
