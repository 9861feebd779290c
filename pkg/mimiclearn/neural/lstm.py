"""LSTM teacher over the temporal tensor, trained with backpropagation through time."""

import logging
from dataclasses import dataclass, field
from typing import Any, ClassVar, Dict, List, Optional, Tuple

import numpy as np
from scipy.special import expit

from ..models import Activation, OptimizerKind, TeacherKind, TrainConfig
from ..utils import decode_array, encode_array
from .api import NeuralModel
from .layers import LayerParams, Standardizer, binary_cross_entropy, glorot_uniform
from .training import as_rows, check_training_inputs, run_epochs

logger = logging.getLogger(__name__)

# forget, input, candidate cell, output
GATES = ("f", "i", "c", "o")


@dataclass
class LstmParams:
    """Gate weights of one LSTM block plus the prediction layer.

    ``w_<gate>h`` are H x H recurrent weights, ``w_<gate>x`` are H x P input
    weights and ``b_<gate>`` are H biases; gate ``c`` is the candidate cell.
    The prediction layer reads the t-major flattening of (h_1 .. h_T).
    """

    w_fh: np.ndarray
    w_ih: np.ndarray
    w_ch: np.ndarray
    w_oh: np.ndarray
    w_fx: np.ndarray
    w_ix: np.ndarray
    w_cx: np.ndarray
    w_ox: np.ndarray
    b_f: np.ndarray
    b_i: np.ndarray
    b_c: np.ndarray
    b_o: np.ndarray
    prediction_layer: LayerParams

    def __post_init__(self):
        h, p = self.hidden_size, self.input_size
        for gate in GATES:
            if self.recurrent(gate).shape != (h, h):
                raise ValueError(f"w_{gate}h must be {h}x{h}")
            if self.input_weights(gate).shape != (h, p):
                raise ValueError(f"w_{gate}x must be {h}x{p}")
            if self.bias(gate).shape != (h,):
                raise ValueError(f"b_{gate} must have {h} entries")
        if self.prediction_layer.fan_in % h != 0 or self.prediction_layer.fan_out != 1:
            raise ValueError("Prediction layer must map T*H flattened outputs to one score")

    @classmethod
    def initialize(
        cls, rng: np.random.Generator, input_size: int, hidden_size: int, t_steps: int
    ) -> "LstmParams":
        weights = {}
        for gate in GATES:
            weights[f"w_{gate}h"] = glorot_uniform(rng, hidden_size, hidden_size)
            weights[f"w_{gate}x"] = glorot_uniform(rng, input_size, hidden_size)
            weights[f"b_{gate}"] = np.zeros(hidden_size)
        head = LayerParams.initialize(rng, t_steps * hidden_size, 1, Activation.SIGMOID)
        return cls(prediction_layer=head, **weights)

    @property
    def hidden_size(self) -> int:
        return int(self.w_fh.shape[0])

    @property
    def input_size(self) -> int:
        return int(self.w_fx.shape[1])

    @property
    def t_steps(self) -> int:
        return self.prediction_layer.fan_in // self.hidden_size

    def recurrent(self, gate: str) -> np.ndarray:
        return getattr(self, f"w_{gate}h")

    def input_weights(self, gate: str) -> np.ndarray:
        return getattr(self, f"w_{gate}x")

    def bias(self, gate: str) -> np.ndarray:
        return getattr(self, f"b_{gate}")

    def named_parameters(self) -> List[Tuple[str, np.ndarray]]:
        named = []
        for gate in GATES:
            named.append((f"w_{gate}h", self.recurrent(gate)))
            named.append((f"w_{gate}x", self.input_weights(gate)))
            named.append((f"b_{gate}", self.bias(gate)))
        named.extend([("W_out", self.prediction_layer.weights), ("b_out", self.prediction_layer.bias)])
        return named

    def to_dict(self) -> Dict[str, Any]:
        payload = {name: encode_array(a) for name, a in self.named_parameters()[:-2]}
        payload["prediction_layer"] = self.prediction_layer.to_dict()
        return payload

    @classmethod
    def from_dict(cls, payload: Dict[str, Any]) -> "LstmParams":
        arrays = {k: decode_array(v) for k, v in payload.items() if k != "prediction_layer"}
        return cls(prediction_layer=LayerParams.from_dict(payload["prediction_layer"]), **arrays)


def _gates(
    params: LstmParams, x_t: np.ndarray, h_prev: np.ndarray
) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    def pre(gate: str) -> np.ndarray:
        return (
            h_prev @ params.recurrent(gate).T
            + x_t @ params.input_weights(gate).T
            + params.bias(gate)
        )

    return expit(pre("f")), expit(pre("i")), np.tanh(pre("c")), expit(pre("o"))


def lstm_step(
    params: LstmParams, x_t: np.ndarray, h_prev: np.ndarray, c_prev: np.ndarray
) -> Tuple[np.ndarray, np.ndarray]:
    """Advance one time step.

    f = s(W_fh h + W_fx x + b_f), i and o likewise, C~ = tanh(W_Ch h + W_Cx x + b_C),
    C_t = f * C_prev + i * C~ and h_t = o * tanh(C_t).

    Works on single vectors (P,) or batches (N x P).

    Raises:
        ValueError: If the input or state shapes do not match ``params``
    """
    x_t, h_prev, c_prev = (np.asarray(a, dtype=np.float64) for a in (x_t, h_prev, c_prev))
    if x_t.shape[-1] != params.input_size:
        raise ValueError(f"Expected {params.input_size} inputs, got {x_t.shape[-1]}")
    if h_prev.shape[-1] != params.hidden_size or c_prev.shape != h_prev.shape:
        raise ValueError(
            f"State must have {params.hidden_size} units, got h {h_prev.shape} and C {c_prev.shape}"
        )
    f, i, g, o = _gates(params, x_t, h_prev)
    c = f * c_prev + i * g
    return o * np.tanh(c), c


@dataclass
class _StepCache:
    x: np.ndarray
    h_prev: np.ndarray
    c_prev: np.ndarray
    f: np.ndarray
    i: np.ndarray
    g: np.ndarray
    o: np.ndarray
    c: np.ndarray


def _unroll(params: LstmParams, x: np.ndarray) -> Tuple[np.ndarray, List[_StepCache]]:
    """Run the sequence from zero state; returns outputs (N x T x H) and step caches."""
    n, t_steps, _ = x.shape
    h = np.zeros((n, params.hidden_size))
    c = np.zeros((n, params.hidden_size))
    outputs = np.empty((n, t_steps, params.hidden_size))
    caches = []
    for t in range(t_steps):
        f, i, g, o = _gates(params, x[:, t], h)
        c_next = f * c + i * g
        caches.append(_StepCache(x=x[:, t], h_prev=h, c_prev=c, f=f, i=i, g=g, o=o, c=c_next))
        h = o * np.tanh(c_next)
        c = c_next
        outputs[:, t] = h
    return outputs, caches


def _logits(params: LstmParams, features: np.ndarray) -> np.ndarray:
    head = params.prediction_layer
    return (features @ head.weights.T + head.bias)[:, 0]


def sequence_loss(params: LstmParams, x: np.ndarray, y: np.ndarray) -> float:
    outputs, _ = _unroll(params, x)
    return binary_cross_entropy(_logits(params, outputs.reshape(outputs.shape[0], -1)), y)


def bptt(params: LstmParams, x: np.ndarray, y: np.ndarray) -> Tuple[float, List[np.ndarray]]:
    """Mean cross-entropy and its full backpropagation-through-time gradients.

    Gradients follow :meth:`LstmParams.named_parameters` order.
    """
    n, t_steps, _ = x.shape
    hidden = params.hidden_size
    outputs, caches = _unroll(params, x)
    features = outputs.reshape(n, t_steps * hidden)
    logits = _logits(params, features)
    loss = binary_cross_entropy(logits, y)

    dlogits = (expit(logits) - y) / n
    head = params.prediction_layer
    d_head = [dlogits[None, :] @ features, np.array([dlogits.sum()])]
    dh_out = np.outer(dlogits, head.weights[0]).reshape(n, t_steps, hidden)

    d_rec = {gate: np.zeros_like(params.recurrent(gate)) for gate in GATES}
    d_in = {gate: np.zeros_like(params.input_weights(gate)) for gate in GATES}
    d_bias = {gate: np.zeros_like(params.bias(gate)) for gate in GATES}
    dh_next = np.zeros((n, hidden))
    dc_next = np.zeros((n, hidden))

    for t in range(t_steps - 1, -1, -1):
        step = caches[t]
        dh = dh_out[:, t] + dh_next
        tanh_c = np.tanh(step.c)
        dc = dc_next + dh * step.o * (1.0 - tanh_c**2)
        dz = {
            "f": dc * step.c_prev * step.f * (1.0 - step.f),
            "i": dc * step.g * step.i * (1.0 - step.i),
            "c": dc * step.i * (1.0 - step.g**2),
            "o": dh * tanh_c * step.o * (1.0 - step.o),
        }
        dc_next = dc * step.f
        dh_next = np.zeros((n, hidden))
        for gate in GATES:
            d_rec[gate] += dz[gate].T @ step.h_prev
            d_in[gate] += dz[gate].T @ step.x
            d_bias[gate] += dz[gate].sum(axis=0)
            dh_next += dz[gate] @ params.recurrent(gate)

    grads = []
    for gate in GATES:
        grads.extend([d_rec[gate], d_in[gate], d_bias[gate]])
    return loss, grads + d_head


@dataclass
class LstmModel(NeuralModel):
    """LSTM block, input standardizer and training record."""

    kind: ClassVar[TeacherKind] = TeacherKind.LSTM

    params: LstmParams
    standardizer: Standardizer
    train_config: TrainConfig = field(default_factory=TrainConfig)
    history: List[float] = field(default_factory=list)

    @property
    def hidden_size(self) -> int:
        return self.params.hidden_size

    @property
    def t_steps(self) -> int:
        return self.params.t_steps

    def named_parameters(self) -> List[Tuple[str, np.ndarray]]:
        return self.params.named_parameters()

    def _prepare(self, x) -> np.ndarray:
        x = as_rows(x, ndim=3)
        if x.shape[1] != self.t_steps or x.shape[2] != self.params.input_size:
            raise ValueError(
                f"Expected sequences of shape (T={self.t_steps}, P={self.params.input_size}), "
                f"got {x.shape[1:]}"
            )
        return self.standardizer.transform(x)

    def extract_features(self, x) -> np.ndarray:
        outputs, _ = _unroll(self.params, self._prepare(x))
        return outputs.reshape(outputs.shape[0], -1)

    def predict_soft(self, x) -> np.ndarray:
        return expit(_logits(self.params, self.extract_features(x)))

    def loss_and_grads(self, x, y) -> Tuple[float, List[np.ndarray]]:
        return bptt(self.params, self._prepare(x), np.asarray(y, dtype=np.float64))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "params": self.params.to_dict(),
            "standardizer": self.standardizer.to_dict(),
            "train_config": self.train_config.model_dump(mode="json"),
            "history": list(self.history),
        }

    @classmethod
    def from_dict(cls, payload: Dict[str, Any]) -> "LstmModel":
        return cls(
            params=LstmParams.from_dict(payload["params"]),
            standardizer=Standardizer.from_dict(payload["standardizer"]),
            train_config=TrainConfig.model_validate(payload["train_config"]),
            history=[float(v) for v in payload.get("history", [])],
        )


def train_lstm(x_ts, y, cfg: Optional[TrainConfig] = None) -> LstmModel:
    """Train the LSTM teacher on the temporal tensor only.

    Args:
        x_ts: Imputed temporal tensor (N x T x P)
        y: Binary labels
        cfg: Training configuration; the optimizer defaults to RMSprop and
            the hidden size to ``hidden_multiplier * P``

    Returns:
        Trained LstmModel

    Raises:
        ValueError: On empty or non-finite input
        NonFiniteLossError: If the loss diverges
    """
    cfg = cfg or TrainConfig()
    x_ts = as_rows(x_ts, ndim=3)
    y = np.asarray(y, dtype=np.float64)
    check_training_inputs(x_ts, y)
    n, t_steps, p = x_ts.shape
    if t_steps < 1 or p < 1:
        raise ValueError(f"Sequences need T >= 1 and P >= 1, got T={t_steps}, P={p}")

    hidden = cfg.lstm_hidden_size or cfg.hidden_multiplier * p
    rng = np.random.default_rng(cfg.seed)
    params = LstmParams.initialize(rng, p, hidden, t_steps)
    model = LstmModel(
        params=params,
        standardizer=Standardizer.fit(x_ts, axis=(0, 1)),
        train_config=cfg,
    )
    xs = model.standardizer.transform(x_ts)

    model.history = run_epochs(
        model.parameters(),
        lambda idx: bptt(params, xs[idx], y[idx])[1],
        lambda: sequence_loss(params, xs, y),
        n_samples=n,
        epochs=cfg.epochs,
        batch_size=cfg.batch_size,
        learning_rate=cfg.learning_rate,
        optimizer_kind=cfg.resolved_optimizer(OptimizerKind.RMSPROP),
        rng=rng,
        phase="lstm",
    )
    logger.info(
        f"Trained LSTM (T={t_steps}, P={p}, H={hidden}) for {cfg.epochs} epochs: "
        f"loss {model.history[0]:.4f} -> {model.history[-1]:.4f}"
    )
    return model
