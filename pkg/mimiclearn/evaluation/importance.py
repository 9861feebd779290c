"""Feature importance aggregated over cross-validation fold models."""

import logging
from typing import List, Sequence, Union

import numpy as np
from pydantic import BaseModel, Field

from ..trees import GbtEnsemble, Tree, feature_importance

logger = logging.getLogger(__name__)


class FeatureScore(BaseModel):
    feature: str
    score: float


class ImportanceReport(BaseModel):
    """Mean importance per feature plus the top-k ranking."""

    feature_names: List[str]
    scores: List[float]
    top_k: List[FeatureScore] = Field(default_factory=list)
    n_models: int = 0

    def to_json(self, indent: int = 2) -> str:
        return self.model_dump_json(indent=indent)


def aggregate_importance(
    models: Sequence[Union[GbtEnsemble, Tree]],
    feature_names: Sequence[str],
    k: int = 10,
) -> ImportanceReport:
    """Average normalized per-model importances, renormalize and rank.

    Ties in the ranking keep column order.

    Raises:
        ValueError: If no models are given or feature spaces differ
    """
    if not models:
        raise ValueError("aggregate_importance needs at least one model")
    names = list(feature_names)
    vectors = []
    for model in models:
        if model.n_features != len(names):
            raise ValueError(
                f"Model has {model.n_features} features but {len(names)} names were given"
            )
        vectors.append(feature_importance(model))

    mean = np.mean(vectors, axis=0)
    total = mean.sum()
    scores = mean / total if total > 0 else mean
    order = np.argsort(-scores, kind="stable")[: max(k, 0)]
    top = [FeatureScore(feature=names[i], score=float(scores[i])) for i in order]
    leader = top[0].feature if top else "-"
    logger.debug(f"Aggregated importance over {len(models)} models; top feature {leader}")
    return ImportanceReport(
        feature_names=names,
        scores=[float(s) for s in scores],
        top_k=top,
        n_models=len(models),
    )
