"""Ranking metrics."""

import numpy as np
from scipy.stats import rankdata


def _check(scores, labels):
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels)
    if scores.shape != labels.shape or scores.ndim != 1:
        raise ValueError(f"Scores {scores.shape} and labels {labels.shape} do not align")
    if not np.isin(labels, (0, 1)).all():
        raise ValueError("AUC labels must be 0 or 1")
    positives = labels == 1
    n_pos = int(positives.sum())
    n_neg = labels.shape[0] - n_pos
    if n_pos == 0 or n_neg == 0:
        raise ValueError("AUC needs at least one positive and one negative label")
    return scores, positives, n_pos, n_neg


def auc(scores, labels) -> float:
    """Area under the ROC curve via the Mann-Whitney rank sum.

    Ties share the average rank, so tied positive/negative pairs count 0.5.

    Raises:
        ValueError: If only one class is present or shapes differ
    """
    scores, positives, n_pos, n_neg = _check(scores, labels)
    ranks = rankdata(scores, method="average")
    u_statistic = ranks[positives].sum() - n_pos * (n_pos + 1) / 2.0
    return float(u_statistic / (n_pos * n_neg))


def auc_pairwise(scores, labels) -> float:
    """O(n^2) pair count of the same statistic."""
    scores, positives, n_pos, n_neg = _check(scores, labels)
    diff = scores[positives][:, None] - scores[~positives][None, :]
    wins = np.count_nonzero(diff > 0) + 0.5 * np.count_nonzero(diff == 0)
    return float(wins / (n_pos * n_neg))
