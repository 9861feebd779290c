"""Mini-batch training loop shared by the teachers."""

import logging
from typing import Callable, List

import numpy as np

from ..models import OptimizerKind
from .optim import make_optimizer

logger = logging.getLogger(__name__)


class NonFiniteLossError(RuntimeError):
    """Training produced a NaN or infinite loss."""

    def __init__(self, epoch: int, loss: float, phase: str = "training"):
        super().__init__(f"Non-finite {phase} loss {loss} at epoch {epoch}")
        self.epoch = epoch
        self.loss = loss
        self.phase = phase


def check_training_inputs(x: np.ndarray, y: np.ndarray) -> None:
    """Reject empty or non-finite training data.

    Raises:
        ValueError: If there are no rows, misaligned labels or non-finite values
    """
    if x.shape[0] == 0:
        raise ValueError("Cannot train on an empty dataset")
    if y.shape[0] != x.shape[0]:
        raise ValueError(f"Got {x.shape[0]} rows but {y.shape[0]} labels")
    if not np.isfinite(x).all():
        raise ValueError("Training inputs contain missing or non-finite values")


def run_epochs(
    params: List[np.ndarray],
    grad_fn: Callable[[np.ndarray], List[np.ndarray]],
    loss_fn: Callable[[], float],
    n_samples: int,
    epochs: int,
    batch_size: int,
    learning_rate: float,
    optimizer_kind: OptimizerKind,
    rng: np.random.Generator,
    phase: str = "training",
) -> List[float]:
    """Run shuffled mini-batch epochs, updating ``params`` in place.

    Args:
        params: Parameter arrays, updated in place
        grad_fn: Maps a batch of row indices to gradients aligned with params
        loss_fn: Full-data loss used for the per-epoch history
        n_samples: Number of training rows
        epochs: Number of passes over the data
        batch_size: Rows per update
        learning_rate: Optimizer step size
        optimizer_kind: SGD or RMSprop
        rng: Source of the per-epoch shuffles
        phase: Name used in logs and errors

    Returns:
        Loss before training followed by the loss after each epoch

    Raises:
        NonFiniteLossError: If the loss becomes NaN or infinite
    """
    optimizer = make_optimizer(optimizer_kind, params, learning_rate)
    loss = loss_fn()
    if not np.isfinite(loss):
        raise NonFiniteLossError(0, loss, phase)
    history = [loss]

    for epoch in range(1, epochs + 1):
        order = rng.permutation(n_samples)
        for start in range(0, n_samples, batch_size):
            optimizer.step(grad_fn(order[start : start + batch_size]))
        loss = loss_fn()
        if not np.isfinite(loss):
            raise NonFiniteLossError(epoch, loss, phase)
        history.append(loss)
        logger.debug(f"{phase} epoch {epoch}/{epochs}: loss {loss:.6f}")

    return history


def as_rows(x, ndim: int = 2) -> np.ndarray:
    """Float64 array view of a design matrix, DataFrame or raw array.

    Raises:
        ValueError: If the array does not have ``ndim`` dimensions
    """
    values = np.asarray(getattr(x, "values", x), dtype=np.float64)
    if values.ndim != ndim:
        raise ValueError(f"Expected a {ndim}-D input, got shape {values.shape}")
    return values
