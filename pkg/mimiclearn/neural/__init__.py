"""Neural teachers with hand-derived gradients."""

from .api import NeuralModel, extract_features, predict_soft
from .gradcheck import GRADIENT_TOLERANCE, GradCheckResult, gradient_check
from .layers import LayerParams, Standardizer, binary_cross_entropy
from .lstm import LstmModel, LstmParams, lstm_step, train_lstm
from .mlp import MlpModel, hidden_widths, train_mlp
from .optim import RmspropOptimizer, SgdOptimizer, make_optimizer, rmsprop_step
from .sda import SdaModel, corrupt, decode, reconstruction_loss, train_sda
from .training import NonFiniteLossError

__all__ = [
    "NeuralModel",
    "extract_features",
    "predict_soft",
    "GRADIENT_TOLERANCE",
    "GradCheckResult",
    "gradient_check",
    "LayerParams",
    "Standardizer",
    "binary_cross_entropy",
    "LstmModel",
    "LstmParams",
    "lstm_step",
    "train_lstm",
    "MlpModel",
    "hidden_widths",
    "train_mlp",
    "RmspropOptimizer",
    "SgdOptimizer",
    "make_optimizer",
    "rmsprop_step",
    "SdaModel",
    "corrupt",
    "decode",
    "reconstruction_loss",
    "train_sda",
    "NonFiniteLossError",
]
