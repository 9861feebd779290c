"""Stacked denoising autoencoder teacher with tied decoder weights."""

import logging
from dataclasses import dataclass, field
from typing import Any, ClassVar, Dict, List, Optional, Tuple

import numpy as np
from scipy.special import expit

from ..models import Activation, OptimizerKind, TeacherKind, TrainConfig
from ..utils import decode_array, encode_array
from . import feedforward as ff
from .api import NeuralModel
from .layers import LayerParams, Standardizer, activate, activation_grad, binary_cross_entropy
from .mlp import build_stack, hidden_widths
from .training import as_rows, check_training_inputs, run_epochs

logger = logging.getLogger(__name__)


def corrupt(x: np.ndarray, rate: float, rng: np.random.Generator) -> np.ndarray:
    """Zero each coordinate independently with probability ``rate``."""
    return x * (rng.random(x.shape) >= rate)


def decode(
    layer: LayerParams, decoder_bias: np.ndarray, activation: Activation, h: np.ndarray
) -> np.ndarray:
    """Map hidden activations back through the transposed encoder weights."""
    return activate(h @ layer.weights + decoder_bias, activation)


def reconstruction_loss(
    layer: LayerParams,
    decoder_bias: np.ndarray,
    decoder_activation: Activation,
    x: np.ndarray,
    x_corrupted: Optional[np.ndarray] = None,
) -> Tuple[float, List[np.ndarray]]:
    """Squared reconstruction error of ``x`` from its corrupted copy.

    loss = sum ||r - x||^2 / (2n) with r = s_d(s(x~ W^T + b) W + b_d).

    Returns:
        (loss, [dW, db, db_d]); dW sums the encoder and decoder paths
        because both use the same weight matrix.
    """
    x_in = x if x_corrupted is None else x_corrupted
    n = x.shape[0]
    z_h, h = layer.forward(x_in)
    z_r = h @ layer.weights + decoder_bias
    r = activate(z_r, decoder_activation)
    diff = r - x
    loss = float(0.5 * np.sum(diff**2) / n)

    dz_r = (diff / n) * activation_grad(z_r, r, decoder_activation)
    dh = dz_r @ layer.weights.T
    dz_h = dh * activation_grad(z_h, h, layer.activation)
    d_weights = h.T @ dz_r + dz_h.T @ x_in
    return loss, [d_weights, dz_h.sum(axis=0), dz_r.sum(axis=0)]


def decoder_activation_for(layer_index: int, encoder: List[LayerParams]) -> Activation:
    """Linear output for the (standardized) input layer, else the activation below."""
    if layer_index == 0:
        return Activation.LINEAR
    return encoder[layer_index - 1].activation


@dataclass
class SdaModel(NeuralModel):
    """Encoder layers, per-layer decoder biases and a logistic prediction layer.

    Decoder layer ``l`` reuses ``encoder[l].weights`` transposed, so there is
    a single storage for each tied weight matrix.
    """

    kind: ClassVar[TeacherKind] = TeacherKind.SDA

    encoder: List[LayerParams]
    decoder_biases: List[np.ndarray]
    decoder_activations: List[Activation]
    prediction_layer: LayerParams
    standardizer: Standardizer
    noise_rate: float = 0.2
    train_config: TrainConfig = field(default_factory=TrainConfig)
    pretrain_history: List[List[float]] = field(default_factory=list)
    history: List[float] = field(default_factory=list)

    def __post_init__(self):
        if len(self.decoder_biases) != len(self.encoder):
            raise ValueError("Need one decoder bias per encoder layer")
        if len(self.decoder_activations) != len(self.encoder):
            raise ValueError("Need one decoder activation per encoder layer")
        for layer, bias in zip(self.encoder, self.decoder_biases):
            if bias.shape != (layer.fan_in,):
                raise ValueError(
                    f"Decoder bias has shape {bias.shape}, expected ({layer.fan_in},)"
                )
        if not 0.0 <= self.noise_rate < 1.0:
            raise ValueError(f"noise_rate must be in [0, 1), got {self.noise_rate}")

    @property
    def hidden_sizes(self) -> List[int]:
        return [layer.fan_out for layer in self.encoder]

    def named_parameters(self) -> List[Tuple[str, np.ndarray]]:
        """Encoder and head parameters updated by fine-tuning."""
        named = []
        for i, layer in enumerate(self.encoder):
            named.extend([(f"W{i + 1}", layer.weights), (f"b{i + 1}", layer.bias)])
        named.extend([("W_out", self.prediction_layer.weights), ("b_out", self.prediction_layer.bias)])
        return named

    def _prepare(self, x) -> np.ndarray:
        return self.standardizer.transform(as_rows(x))

    def layer_inputs(self, x_standardized: np.ndarray) -> List[np.ndarray]:
        """Clean input seen by each encoder layer."""
        inputs = [x_standardized]
        for layer in self.encoder[:-1]:
            inputs.append(layer.forward(inputs[-1])[1])
        return inputs

    def extract_features(self, x) -> np.ndarray:
        return ff.encode(self.encoder, self._prepare(x))

    def predict_soft(self, x) -> np.ndarray:
        return expit(ff.forward(self.encoder, self.prediction_layer, self._prepare(x)).logits)

    def reconstruct(self, x) -> np.ndarray:
        """Encode through every layer and decode back down to input units."""
        h = ff.encode(self.encoder, self._prepare(x))
        for l in range(len(self.encoder) - 1, -1, -1):
            h = decode(self.encoder[l], self.decoder_biases[l], self.decoder_activations[l], h)
        return h * self.standardizer.scale + self.standardizer.mean

    def loss_and_grads(self, x, y) -> Tuple[float, List[np.ndarray]]:
        y = np.asarray(y, dtype=np.float64)
        cache = ff.forward(self.encoder, self.prediction_layer, self._prepare(x))
        loss = binary_cross_entropy(cache.logits, y)
        return loss, ff.backward(self.encoder, self.prediction_layer, cache, y)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "encoder": [layer.to_dict() for layer in self.encoder],
            "decoder_biases": [encode_array(b) for b in self.decoder_biases],
            "decoder_activations": [a.value for a in self.decoder_activations],
            "prediction_layer": self.prediction_layer.to_dict(),
            "standardizer": self.standardizer.to_dict(),
            "noise_rate": self.noise_rate,
            "train_config": self.train_config.model_dump(mode="json"),
            "pretrain_history": [list(h) for h in self.pretrain_history],
            "history": list(self.history),
        }

    @classmethod
    def from_dict(cls, payload: Dict[str, Any]) -> "SdaModel":
        return cls(
            encoder=[LayerParams.from_dict(p) for p in payload["encoder"]],
            decoder_biases=[decode_array(b) for b in payload["decoder_biases"]],
            decoder_activations=[Activation(a) for a in payload["decoder_activations"]],
            prediction_layer=LayerParams.from_dict(payload["prediction_layer"]),
            standardizer=Standardizer.from_dict(payload["standardizer"]),
            noise_rate=float(payload["noise_rate"]),
            train_config=TrainConfig.model_validate(payload["train_config"]),
            pretrain_history=[[float(v) for v in h] for h in payload.get("pretrain_history", [])],
            history=[float(v) for v in payload.get("history", [])],
        )


def pretrain_layer(
    layer: LayerParams,
    decoder_bias: np.ndarray,
    decoder_activation: Activation,
    x: np.ndarray,
    cfg: TrainConfig,
    rng: np.random.Generator,
    phase: str = "sda-pretrain",
) -> List[float]:
    """Denoising pretraining of one layer, updating it and ``decoder_bias`` in place.

    The recorded history is the clean (uncorrupted) reconstruction loss.
    """

    def grad_fn(idx: np.ndarray) -> List[np.ndarray]:
        batch = x[idx]
        _, grads = reconstruction_loss(
            layer, decoder_bias, decoder_activation, batch, corrupt(batch, cfg.noise_rate, rng)
        )
        return grads

    return run_epochs(
        [layer.weights, layer.bias, decoder_bias],
        grad_fn,
        lambda: reconstruction_loss(layer, decoder_bias, decoder_activation, x)[0],
        n_samples=x.shape[0],
        epochs=cfg.epochs,
        batch_size=cfg.batch_size,
        learning_rate=cfg.learning_rate,
        optimizer_kind=cfg.resolved_optimizer(OptimizerKind.SGD),
        rng=rng,
        phase=phase,
    )


def train_sda(x, y, cfg: Optional[TrainConfig] = None) -> SdaModel:
    """Greedy layerwise denoising pretraining followed by supervised fine-tuning.

    Each phase (every layer's pretraining and the fine-tuning) runs
    ``cfg.epochs`` epochs at ``cfg.learning_rate``.

    Args:
        x: Imputed design matrix (N x D)
        y: Binary labels
        cfg: Training configuration

    Returns:
        Fine-tuned SdaModel

    Raises:
        ValueError: On empty or non-finite input
        NonFiniteLossError: If either phase diverges
    """
    cfg = cfg or TrainConfig()
    x = as_rows(x)
    y = np.asarray(y, dtype=np.float64)
    check_training_inputs(x, y)

    rng = np.random.default_rng(cfg.seed)
    widths = hidden_widths(x.shape[1], cfg)
    encoder, head = build_stack(rng, x.shape[1], widths, cfg.activation)
    model = SdaModel(
        encoder=encoder,
        decoder_biases=[np.zeros(layer.fan_in) for layer in encoder],
        decoder_activations=[decoder_activation_for(l, encoder) for l in range(len(encoder))],
        prediction_layer=head,
        standardizer=Standardizer.fit(x),
        noise_rate=cfg.noise_rate,
        train_config=cfg,
    )

    xs = model.standardizer.transform(x)
    layer_input = xs
    for l, layer in enumerate(encoder):
        history = pretrain_layer(
            layer,
            model.decoder_biases[l],
            model.decoder_activations[l],
            layer_input,
            cfg,
            rng,
            phase=f"sda-pretrain-{l + 1}",
        )
        model.pretrain_history.append(history)
        logger.info(
            f"Pretrained SDA layer {l + 1}/{len(encoder)}: "
            f"reconstruction {history[0]:.4f} -> {history[-1]:.4f}"
        )
        layer_input = layer.forward(layer_input)[1]

    def grad_fn(idx: np.ndarray) -> List[np.ndarray]:
        cache = ff.forward(encoder, head, xs[idx])
        return ff.backward(encoder, head, cache, y[idx])

    model.history = run_epochs(
        model.parameters(),
        grad_fn,
        lambda: ff.loss(encoder, head, xs, y),
        n_samples=x.shape[0],
        epochs=cfg.epochs,
        batch_size=cfg.batch_size,
        learning_rate=cfg.learning_rate,
        optimizer_kind=cfg.resolved_optimizer(OptimizerKind.SGD),
        rng=rng,
        phase="sda-finetune",
    )
    logger.info(
        f"Fine-tuned SDA {x.shape[1]}->{widths}: "
        f"loss {model.history[0]:.4f} -> {model.history[-1]:.4f}"
    )
    return model
