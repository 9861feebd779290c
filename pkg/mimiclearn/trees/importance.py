"""Impurity-decrease feature importance."""

from typing import Union

import numpy as np

from .base import Tree
from .gbt import GbtEnsemble


def tree_contributions(tree: Tree) -> np.ndarray:
    """Unnormalized importance of one tree.

    Each split node adds (n_node / N) * (impurity - weighted child impurity)
    to its feature, N being the root's sample count.
    """
    scores = np.zeros(tree.n_features)
    total = tree.root.n_samples
    for node in tree.root.walk():
        if node.is_leaf:
            continue
        decrease = (
            node.n_samples * node.impurity
            - node.left.n_samples * node.left.impurity
            - node.right.n_samples * node.right.impurity
        ) / total
        scores[node.feature_index] += max(decrease, 0.0)
    return scores


def _normalize(scores: np.ndarray) -> np.ndarray:
    total = scores.sum()
    if total <= 0.0:
        return np.zeros_like(scores)
    return scores / total


def feature_importance(model: Union[Tree, GbtEnsemble]) -> np.ndarray:
    """Importance vector summing to 1 (all zeros when nothing was split).

    Ensembles average the unnormalized per-stage contributions and
    normalize once.
    """
    if isinstance(model, GbtEnsemble):
        if not model.stages:
            return np.zeros(model.n_features)
        return _normalize(np.mean([tree_contributions(t) for t in model.stages], axis=0))
    return _normalize(tree_contributions(model))


def most_important_stage(ensemble: GbtEnsemble) -> int:
    """Index of the stage with the largest total impurity decrease.

    Raises:
        ValueError: If the ensemble has no stages
    """
    if not ensemble.stages:
        raise ValueError("Ensemble has no stages")
    totals = [tree_contributions(t).sum() for t in ensemble.stages]
    return int(np.argmax(totals))
