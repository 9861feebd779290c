"""Gradient-boosted regression trees under squared loss."""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from ..models import TreeConfig, TreeKind
from .base import Tree, check_features
from .cart import cart_fit

logger = logging.getLogger(__name__)


@dataclass
class GbtEnsemble:
    """F(x) = base_score + shrinkage * sum of stage predictions.

    Each stage's leaves hold the mean residual of their rows, which is the
    exact line-search step for squared loss, so no per-stage multiplier is
    stored.
    """

    base_score: float
    stages: List[Tree]
    shrinkage: float
    n_features: int
    feature_names: List[str] = field(default_factory=list)
    history: List[float] = field(default_factory=list)

    def predict(self, x) -> np.ndarray:
        x = check_features(x, self.n_features)
        out = np.full(x.shape[0], self.base_score)
        for stage in self.stages:
            out += self.shrinkage * stage.predict(x)
        return out

    def staged_predict(self, x) -> List[np.ndarray]:
        """Predictions after 0, 1, ..., M stages."""
        x = check_features(x, self.n_features)
        current = np.full(x.shape[0], self.base_score)
        staged = [current.copy()]
        for stage in self.stages:
            current = current + self.shrinkage * stage.predict(x)
            staged.append(current.copy())
        return staged

    def to_dict(self) -> Dict[str, Any]:
        return {
            "base_score": self.base_score,
            "shrinkage": self.shrinkage,
            "n_features": self.n_features,
            "feature_names": list(self.feature_names),
            "history": list(self.history),
            "stages": [stage.to_dict() for stage in self.stages],
        }

    @classmethod
    def from_dict(cls, payload: Dict[str, Any]) -> "GbtEnsemble":
        return cls(
            base_score=float(payload["base_score"]),
            stages=[Tree.from_dict(s) for s in payload["stages"]],
            shrinkage=float(payload["shrinkage"]),
            n_features=int(payload["n_features"]),
            feature_names=list(payload.get("feature_names", [])),
            history=[float(v) for v in payload.get("history", [])],
        )


def gbt_fit(
    x,
    targets,
    cfg: Optional[TreeConfig] = None,
    feature_names: Optional[Sequence[str]] = None,
) -> GbtEnsemble:
    """Boost ``cfg.n_stages`` regression trees on squared-error residuals.

    Args:
        x: Design matrix (N x D)
        targets: Real targets (soft scores or 0/1 labels)
        cfg: Boosting settings (100 stages, shrinkage 0.1, depth 3)
        feature_names: Optional column names carried on every stage

    Returns:
        GbtEnsemble with the training MSE after each stage in ``history``

    Raises:
        ValueError: On empty, misaligned or non-finite inputs
    """
    cfg = cfg or TreeConfig()
    x = np.asarray(getattr(x, "values", x), dtype=np.float64)
    targets = np.asarray(targets, dtype=np.float64)
    if x.ndim != 2 or x.shape[0] == 0:
        raise ValueError(f"Cannot boost on data of shape {x.shape}")
    if targets.shape != (x.shape[0],) or not np.isfinite(targets).all():
        raise ValueError("Boosting targets must be finite and aligned with the rows")

    rng = np.random.default_rng(cfg.seed) if cfg.random_tie_break else None
    names = list(feature_names or [])
    base_score = float(targets.mean())
    current = np.full(x.shape[0], base_score)
    history = [float(np.mean((targets - current) ** 2))]
    stages = []

    for m in range(cfg.n_stages):
        residuals = targets - current
        stage = cart_fit(x, residuals, cfg, TreeKind.REGRESSOR_MSE, names, rng=rng)
        current = current + cfg.shrinkage * stage.predict(x)
        stages.append(stage)
        history.append(float(np.mean((targets - current) ** 2)))
        logger.debug(f"Boosting stage {m + 1}/{cfg.n_stages}: training MSE {history[-1]:.6f}")

    logger.info(
        f"Boosted {cfg.n_stages} stages (shrinkage {cfg.shrinkage}): "
        f"training MSE {history[0]:.4f} -> {history[-1]:.4f}"
    )
    return GbtEnsemble(
        base_score=base_score,
        stages=stages,
        shrinkage=cfg.shrinkage,
        n_features=x.shape[1],
        feature_names=names,
        history=history,
    )
