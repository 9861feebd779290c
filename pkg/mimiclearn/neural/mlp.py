"""Feedforward teacher (DNN)."""

import logging
from dataclasses import dataclass, field
from typing import Any, ClassVar, Dict, List, Optional, Tuple

import numpy as np
from scipy.special import expit

from ..models import Activation, Objective, OptimizerKind, TeacherKind, TrainConfig
from . import feedforward as ff
from .api import NeuralModel
from .layers import LayerParams, Standardizer, binary_cross_entropy
from .training import as_rows, check_training_inputs, run_epochs

logger = logging.getLogger(__name__)


def hidden_widths(n_inputs: int, cfg: TrainConfig) -> List[int]:
    """Explicit ``hidden_sizes`` or two layers of ``hidden_multiplier * D`` units."""
    if cfg.hidden_sizes:
        return list(cfg.hidden_sizes)
    return [cfg.hidden_multiplier * n_inputs] * 2


def build_stack(
    rng: np.random.Generator, n_inputs: int, widths: List[int], activation: Activation
) -> Tuple[List[LayerParams], LayerParams]:
    """Randomly initialized hidden layers plus a single-output sigmoid head."""
    layers = []
    fan_in = n_inputs
    for width in widths:
        layers.append(LayerParams.initialize(rng, fan_in, width, activation))
        fan_in = width
    head = LayerParams.initialize(rng, fan_in, 1, Activation.SIGMOID)
    return layers, head


@dataclass
class MlpModel(NeuralModel):
    """Hidden layers plus a logistic prediction layer."""

    kind: ClassVar[TeacherKind] = TeacherKind.DNN

    layers: List[LayerParams]
    prediction_layer: LayerParams
    standardizer: Standardizer
    train_config: TrainConfig = field(default_factory=TrainConfig)
    history: List[float] = field(default_factory=list)

    def __post_init__(self):
        fan_in = self.standardizer.mean.shape[0]
        for layer in self.layers + [self.prediction_layer]:
            if layer.fan_in != fan_in:
                raise ValueError(f"Layer expects {layer.fan_in} inputs but receives {fan_in}")
            fan_in = layer.fan_out
        if self.prediction_layer.fan_out != 1:
            raise ValueError("Prediction layer must have a single output")

    @property
    def n_inputs(self) -> int:
        return int(self.standardizer.mean.shape[0])

    @property
    def hidden_sizes(self) -> List[int]:
        return [layer.fan_out for layer in self.layers]

    def named_parameters(self) -> List[Tuple[str, np.ndarray]]:
        named = []
        for i, layer in enumerate(self.layers):
            named.extend([(f"W{i + 1}", layer.weights), (f"b{i + 1}", layer.bias)])
        named.extend([("W_out", self.prediction_layer.weights), ("b_out", self.prediction_layer.bias)])
        return named

    def _prepare(self, x) -> np.ndarray:
        return self.standardizer.transform(as_rows(x))

    def extract_features(self, x) -> np.ndarray:
        return ff.encode(self.layers, self._prepare(x))

    def predict_soft(self, x) -> np.ndarray:
        return expit(ff.forward(self.layers, self.prediction_layer, self._prepare(x)).logits)

    def loss_and_grads(self, x, y) -> Tuple[float, List[np.ndarray]]:
        y = np.asarray(y, dtype=np.float64)
        cache = ff.forward(self.layers, self.prediction_layer, self._prepare(x))
        loss = binary_cross_entropy(cache.logits, y)
        return loss, ff.backward(self.layers, self.prediction_layer, cache, y)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "layers": [layer.to_dict() for layer in self.layers],
            "prediction_layer": self.prediction_layer.to_dict(),
            "standardizer": self.standardizer.to_dict(),
            "train_config": self.train_config.model_dump(mode="json"),
            "history": list(self.history),
        }

    @classmethod
    def from_dict(cls, payload: Dict[str, Any]) -> "MlpModel":
        return cls(
            layers=[LayerParams.from_dict(p) for p in payload["layers"]],
            prediction_layer=LayerParams.from_dict(payload["prediction_layer"]),
            standardizer=Standardizer.from_dict(payload["standardizer"]),
            train_config=TrainConfig.model_validate(payload["train_config"]),
            history=[float(v) for v in payload.get("history", [])],
        )


def train_mlp(
    x,
    y,
    cfg: Optional[TrainConfig] = None,
    objective: Objective = Objective.PREDICT,
) -> MlpModel:
    """Train the feedforward teacher with mini-batch gradient descent.

    Args:
        x: Imputed design matrix (N x D)
        y: Binary labels
        cfg: Training configuration (defaults: 50 epochs, lr 0.001, SGD)
        objective: ``none`` returns the seeded network untrained

    Returns:
        Trained MlpModel with its loss history

    Raises:
        ValueError: On empty or non-finite input
        NonFiniteLossError: If the loss diverges
    """
    cfg = cfg or TrainConfig()
    x = as_rows(x)
    y = np.asarray(y, dtype=np.float64)
    check_training_inputs(x, y)

    rng = np.random.default_rng(cfg.seed)
    widths = hidden_widths(x.shape[1], cfg)
    layers, head = build_stack(rng, x.shape[1], widths, cfg.activation)
    model = MlpModel(
        layers=layers,
        prediction_layer=head,
        standardizer=Standardizer.fit(x),
        train_config=cfg,
    )
    if Objective(objective) == Objective.NONE:
        logger.info(f"MLP {x.shape[1]}->{widths} left untrained (objective=none)")
        return model

    xs = model.standardizer.transform(x)

    def grad_fn(idx: np.ndarray) -> List[np.ndarray]:
        cache = ff.forward(layers, head, xs[idx])
        return ff.backward(layers, head, cache, y[idx])

    model.history = run_epochs(
        model.parameters(),
        grad_fn,
        lambda: ff.loss(layers, head, xs, y),
        n_samples=x.shape[0],
        epochs=cfg.epochs,
        batch_size=cfg.batch_size,
        learning_rate=cfg.learning_rate,
        optimizer_kind=cfg.resolved_optimizer(OptimizerKind.SGD),
        rng=rng,
        phase="mlp",
    )
    logger.info(
        f"Trained MLP {x.shape[1]}->{widths} for {cfg.epochs} epochs: "
        f"loss {model.history[0]:.4f} -> {model.history[-1]:.4f}"
    )
    return model
