"""Finite-difference verification of the analytic gradients."""

import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from ..models import Activation, TeacherKind
from .layers import LayerParams, Standardizer
from .lstm import LstmModel, LstmParams
from .mlp import MlpModel, build_stack
from .sda import SdaModel, corrupt, decoder_activation_for, reconstruction_loss

logger = logging.getLogger(__name__)

GRADIENT_TOLERANCE = 1e-4

# (inputs, hidden units, time steps) per teacher kind
DEFAULT_SHAPES = {
    TeacherKind.DNN: (7, 5, 1),
    TeacherKind.SDA: (7, 5, 1),
    TeacherKind.LSTM: (3, 4, 3),
}


@dataclass
class GradCheckResult:
    """Largest relative error per parameter tensor and overall."""

    kind: TeacherKind
    max_relative_error: float
    per_parameter: Dict[str, float] = field(default_factory=dict)
    n_checked: int = 0

    @property
    def passed(self) -> bool:
        return self.max_relative_error < GRADIENT_TOLERANCE


def relative_error(analytic: np.ndarray, numeric: np.ndarray) -> np.ndarray:
    """|a - n| / max(1e-8, |a| + |n|), elementwise."""
    return np.abs(analytic - numeric) / np.maximum(1e-8, np.abs(analytic) + np.abs(numeric))


def numeric_gradient(loss_fn: Callable[[], float], param: np.ndarray, eps: float) -> np.ndarray:
    """Central differences of ``loss_fn`` w.r.t. every entry of ``param`` (perturbed in place)."""
    grad = np.zeros_like(param)
    flat = param.reshape(-1)
    out = grad.reshape(-1)
    for k in range(flat.size):
        original = flat[k]
        flat[k] = original + eps
        upper = loss_fn()
        flat[k] = original - eps
        lower = loss_fn()
        flat[k] = original
        out[k] = (upper - lower) / (2.0 * eps)
    return grad


def _compare(
    named: List[Tuple[str, np.ndarray]],
    analytic: List[np.ndarray],
    loss_fn: Callable[[], float],
    eps: float,
    prefix: str = "",
) -> Dict[str, float]:
    errors = {}
    for (name, param), grad in zip(named, analytic):
        numeric = numeric_gradient(loss_fn, param, eps)
        errors[f"{prefix}{name}"] = float(relative_error(grad, numeric).max())
    return errors


def gradient_check(
    kind: TeacherKind,
    hidden: Optional[int] = None,
    inputs: Optional[int] = None,
    steps: Optional[int] = None,
    n_samples: int = 6,
    eps: float = 1e-5,
    seed: int = 0,
) -> GradCheckResult:
    """Compare analytic and central-difference gradients on a small random instance.

    The DNN is checked as inputs -> hidden -> hidden -> 1. The SDA check
    covers every layer's tied-weight reconstruction loss under a fixed
    corruption mask plus the fine-tuning loss. The LSTM check runs over
    ``steps`` time steps.

    Args:
        kind: Teacher architecture to check
        hidden: Hidden units per layer (default 5, or 4 for the LSTM)
        inputs: Input width (default 7, or 3 for the LSTM)
        steps: Sequence length for the LSTM (default 3)
        n_samples: Rows in the random batch
        eps: Finite-difference step
        seed: Seed of the random instance

    Returns:
        GradCheckResult with the maximum relative error
    """
    kind = TeacherKind(kind)
    default_inputs, default_hidden, default_steps = DEFAULT_SHAPES[kind]
    inputs = inputs or default_inputs
    hidden = hidden or default_hidden
    steps = steps or default_steps
    rng = np.random.default_rng(seed)
    y = (rng.random(n_samples) < 0.5).astype(np.float64)

    if kind == TeacherKind.LSTM:
        x = rng.normal(size=(n_samples, steps, inputs))
        params = LstmParams.initialize(rng, inputs, hidden, steps)
        for _, array in params.named_parameters():
            if array.ndim == 1:
                array[...] = rng.normal(scale=0.1, size=array.shape)
        model = LstmModel(params=params, standardizer=Standardizer.identity(inputs))
        _, grads = model.loss_and_grads(x, y)
        errors = _compare(
            model.named_parameters(), grads, lambda: model.loss_and_grads(x, y)[0], eps
        )
    else:
        x = rng.normal(size=(n_samples, inputs))
        layers, head = build_stack(rng, inputs, [hidden, hidden], Activation.SIGMOID)
        for layer in layers + [head]:
            layer.bias[...] = rng.normal(scale=0.1, size=layer.bias.shape)
        if kind == TeacherKind.DNN:
            model = MlpModel(
                layers=layers, prediction_layer=head, standardizer=Standardizer.identity(inputs)
            )
            errors = {}
        else:
            model = SdaModel(
                encoder=layers,
                decoder_biases=[rng.normal(scale=0.1, size=layer.fan_in) for layer in layers],
                decoder_activations=[decoder_activation_for(l, layers) for l in range(len(layers))],
                prediction_layer=head,
                standardizer=Standardizer.identity(inputs),
                noise_rate=0.3,
            )
            errors = _check_reconstruction(model, x, rng, eps)
        _, grads = model.loss_and_grads(x, y)
        errors.update(
            _compare(model.named_parameters(), grads, lambda: model.loss_and_grads(x, y)[0], eps)
        )

    worst = max(errors.values())
    logger.info(f"Gradient check {kind.value}: max relative error {worst:.3e}")
    return GradCheckResult(
        kind=kind,
        max_relative_error=worst,
        per_parameter=errors,
        n_checked=sum(p.size for _, p in model.named_parameters()),
    )


def _check_reconstruction(
    model: SdaModel, x: np.ndarray, rng: np.random.Generator, eps: float
) -> Dict[str, float]:
    errors = {}
    for l, x_in in enumerate(model.layer_inputs(x)):
        layer: LayerParams = model.encoder[l]
        bias_d = model.decoder_biases[l]
        act_d = model.decoder_activations[l]
        x_tilde = corrupt(x_in, model.noise_rate, rng)

        def loss_fn() -> float:
            return reconstruction_loss(layer, bias_d, act_d, x_in, x_tilde)[0]

        _, grads = reconstruction_loss(layer, bias_d, act_d, x_in, x_tilde)
        named = [("W", layer.weights), ("b", layer.bias), ("b_d", bias_d)]
        errors.update(_compare(named, grads, loss_fn, eps, prefix=f"recon{l + 1}."))
    return errors
