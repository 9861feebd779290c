"""JSON envelope shared by every model kind."""

import json
import logging
from pathlib import Path
from typing import Any, Dict, Optional, Tuple, Type, Union

from .distill import MimicModel
from .linear import LinearModel
from .neural import LstmModel, MlpModel, SdaModel
from .trees import GbtEnsemble, Tree

logger = logging.getLogger(__name__)

ENVELOPE_FORMAT = "mimiclearn-model"
ENVELOPE_VERSION = 1

MODEL_TYPES: Dict[str, Type] = {
    "mlp": MlpModel,
    "sda": SdaModel,
    "lstm": LstmModel,
    "linear": LinearModel,
    "tree": Tree,
    "gbt": GbtEnsemble,
    "mimic": MimicModel,
}


def model_type_of(model: Any) -> str:
    """Registry key of ``model``.

    Raises:
        ValueError: If the model type is not serializable
    """
    for name, cls in MODEL_TYPES.items():
        if type(model) is cls:
            return name
    raise ValueError(f"Cannot serialize objects of type {type(model).__name__}")


def to_envelope(model: Any, metadata: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
    return {
        "format": ENVELOPE_FORMAT,
        "version": ENVELOPE_VERSION,
        "model_type": model_type_of(model),
        "metadata": dict(metadata or {}),
        "model": model.to_dict(),
    }


def from_envelope(payload: Dict[str, Any]) -> Tuple[Any, Dict[str, Any]]:
    """Rebuild a model and return it with its metadata.

    Raises:
        ValueError: If the payload is not a model envelope
    """
    if not isinstance(payload, dict) or payload.get("format") != ENVELOPE_FORMAT:
        raise ValueError("Not a mimiclearn model file")
    if payload.get("version") != ENVELOPE_VERSION:
        raise ValueError(f"Unsupported model file version: {payload.get('version')}")
    model_type = payload.get("model_type")
    if model_type not in MODEL_TYPES:
        raise ValueError(f"Unknown model_type '{model_type}'")
    try:
        model = MODEL_TYPES[model_type].from_dict(payload["model"])
    except (KeyError, TypeError) as e:
        raise ValueError(f"Malformed {model_type} model: {e}")
    return model, payload.get("metadata", {})


def save_model(
    model: Any, path: Union[str, Path], metadata: Optional[Dict[str, Any]] = None
) -> Path:
    """Write ``model`` as a JSON envelope; floats keep round-trip precision."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(to_envelope(model, metadata), f, sort_keys=True)
    logger.debug(f"Saved {model_type_of(model)} model to {path}")
    return path


def is_model_file(path: Union[str, Path]) -> bool:
    """Whether ``path`` holds a model envelope (any other JSON gives False)."""
    try:
        with open(path, "r", encoding="utf-8") as f:
            payload = json.load(f)
    except (OSError, json.JSONDecodeError):
        return False
    return isinstance(payload, dict) and payload.get("format") == ENVELOPE_FORMAT


def load_model(path: Union[str, Path], expected: Optional[Type] = None) -> Any:
    """Load a model written by :func:`save_model`.

    Args:
        path: Model file
        expected: Optional class (or tuple of classes) the model must be

    Raises:
        FileNotFoundError: If the file does not exist
        ValueError: If the file is not a valid envelope or has the wrong type
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Model file not found: {path}")
    try:
        with open(path, "r", encoding="utf-8") as f:
            payload = json.load(f)
    except json.JSONDecodeError as e:
        raise ValueError(f"Invalid JSON in {path}: {e}")
    model, _ = from_envelope(payload)
    if expected is not None and not isinstance(model, expected):
        raise ValueError(f"{path} holds a {model_type_of(model)} model")
    return model
