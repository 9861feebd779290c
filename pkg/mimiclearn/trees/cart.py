"""Greedy CART growth with Gini or variance-reduction splits."""

import logging
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from ..models import TreeConfig, TreeKind
from .base import Tree, TreeNode

logger = logging.getLogger(__name__)


@dataclass
class SplitCandidate:
    feature_index: int
    threshold: float
    cost: float


def node_impurity(targets: np.ndarray, kind: TreeKind) -> float:
    """Gini 2p(1-p) for classifiers, target variance for regressors."""
    if kind == TreeKind.CLASSIFIER_GINI:
        p = targets.mean()
        return float(2.0 * p * (1.0 - p))
    return float(np.mean((targets - targets.mean()) ** 2))


def _split_costs(sorted_targets: np.ndarray, kind: TreeKind) -> np.ndarray:
    """Summed child impurity (times child size) for a split after each position."""
    n = sorted_targets.shape[0]
    left_n = np.arange(1, n, dtype=np.float64)
    right_n = n - left_n
    left_sum = np.cumsum(sorted_targets)[:-1]
    right_sum = sorted_targets.sum() - left_sum
    if kind == TreeKind.CLASSIFIER_GINI:
        left = 2.0 * left_sum * (left_n - left_sum) / left_n
        right = 2.0 * right_sum * (right_n - right_sum) / right_n
        return left + right
    squares = sorted_targets**2
    left_sq = np.cumsum(squares)[:-1]
    right_sq = squares.sum() - left_sq
    return (left_sq - left_sum**2 / left_n) + (right_sq - right_sum**2 / right_n)


def best_split(
    x: np.ndarray,
    targets: np.ndarray,
    kind: TreeKind,
    rng: Optional[np.random.Generator] = None,
) -> Optional[SplitCandidate]:
    """Split minimizing the summed child impurity.

    Thresholds are midpoints between consecutive distinct values. Ties
    (within a relative tolerance) go to the lowest feature index, then the
    smallest threshold, unless ``rng`` is given, which picks uniformly
    among the tied candidates.

    Returns:
        The best candidate, or None when every feature is constant
    """
    n = targets.shape[0]
    scale = max(1.0, float(np.sum(targets**2)) if kind == TreeKind.REGRESSOR_MSE else float(n))
    tol = 1e-10 * scale

    per_feature = []
    best_cost = np.inf
    for j in range(x.shape[1]):
        order = np.argsort(x[:, j], kind="stable")
        values = x[order, j]
        valid = np.flatnonzero(values[1:] > values[:-1])
        if valid.size == 0:
            continue
        costs = _split_costs(targets[order], kind)[valid]
        per_feature.append((j, values, valid, costs))
        best_cost = min(best_cost, float(costs.min()))

    if not per_feature:
        return None

    tied = []
    for j, values, valid, costs in per_feature:
        for pos in np.flatnonzero(costs <= best_cost + tol):
            tied.append((j, values, int(valid[pos]), float(costs[pos])))
            if rng is None:
                break
        if tied and rng is None:
            break

    j, values, i, cost = tied[int(rng.integers(len(tied)))] if rng is not None else tied[0]
    threshold = 0.5 * (values[i] + values[i + 1])
    if not values[i] <= threshold < values[i + 1]:
        threshold = float(values[i])
    return SplitCandidate(feature_index=j, threshold=float(threshold), cost=cost)


def cart_fit(
    x,
    targets,
    cfg: Optional[TreeConfig] = None,
    kind: TreeKind = TreeKind.CLASSIFIER_GINI,
    feature_names: Optional[Sequence[str]] = None,
    rng: Optional[np.random.Generator] = None,
) -> Tree:
    """Grow a tree top-down.

    A node becomes a leaf when its targets are all equal, it sits at
    ``cfg.max_depth``, it holds fewer than ``cfg.min_samples_split`` rows,
    or no feature varies. Otherwise it is split, even when the best split
    does not lower the impurity (XOR-like data needs such splits).

    Args:
        x: Feature matrix (N x D)
        targets: Binary labels (classifier) or real targets (regressor)
        cfg: Tree settings; ``max_depth=None`` grows until leaves are pure
        kind: Split criterion
        feature_names: Optional column names carried on the tree
        rng: Tie-breaking generator; defaults to one seeded from
            ``cfg.seed`` when ``cfg.random_tie_break`` is set

    Returns:
        The fitted Tree

    Raises:
        ValueError: On empty, misaligned or non-finite inputs
    """
    cfg = cfg or TreeConfig()
    kind = TreeKind(kind)
    x = np.asarray(getattr(x, "values", x), dtype=np.float64)
    targets = np.asarray(targets, dtype=np.float64)
    if x.ndim != 2 or x.shape[0] == 0:
        raise ValueError(f"Cannot grow a tree on data of shape {x.shape}")
    if targets.shape != (x.shape[0],):
        raise ValueError(f"Got {x.shape[0]} rows but targets of shape {targets.shape}")
    if not (np.isfinite(x).all() and np.isfinite(targets).all()):
        raise ValueError("Tree inputs contain missing or non-finite values")
    if kind == TreeKind.CLASSIFIER_GINI and not np.isin(targets, (0.0, 1.0)).all():
        raise ValueError("Classifier targets must be 0 or 1")
    if rng is None and cfg.random_tie_break:
        rng = np.random.default_rng(cfg.seed)

    def make_node(rows: np.ndarray) -> TreeNode:
        t = targets[rows]
        return TreeNode(n_samples=int(rows.size), impurity=node_impurity(t, kind), value=float(t.mean()))

    root = make_node(np.arange(x.shape[0]))
    stack = [(root, np.arange(x.shape[0]), 0)]
    next_id = 0
    while stack:
        node, rows, depth = stack.pop()
        node.node_id = next_id
        next_id += 1

        t = targets[rows]
        if (
            t.max() == t.min()
            or (cfg.max_depth is not None and depth >= cfg.max_depth)
            or rows.size < cfg.min_samples_split
        ):
            continue
        split = best_split(x[rows], t, kind, rng)
        if split is None:
            continue

        goes_left = x[rows, split.feature_index] <= split.threshold
        node.feature_index = split.feature_index
        node.threshold = split.threshold
        node.left = make_node(rows[goes_left])
        node.right = make_node(rows[~goes_left])
        stack.append((node.right, rows[~goes_left], depth + 1))
        stack.append((node.left, rows[goes_left], depth + 1))

    tree = Tree(
        root=root,
        kind=kind,
        n_features=x.shape[1],
        max_depth=cfg.max_depth,
        feature_names=list(feature_names or []),
    )
    logger.debug(f"Grew {kind.value} tree: depth {tree.depth}, {tree.n_leaves} leaves")
    return tree
