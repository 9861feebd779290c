"""Tree nodes, single trees and routing."""

from dataclasses import dataclass, field
from typing import Any, Dict, Iterator, List, Optional

import numpy as np

from ..models import TreeKind


@dataclass
class TreeNode:
    """A split node (``feature_index`` set) or a leaf.

    Rows go left iff ``x[feature_index] <= threshold``. ``value`` is the
    target mean (class-1 fraction for classifiers) of the node's rows and
    is what a leaf predicts.
    """

    n_samples: int
    impurity: float
    value: float
    feature_index: Optional[int] = None
    threshold: Optional[float] = None
    left: Optional["TreeNode"] = None
    right: Optional["TreeNode"] = None
    node_id: int = 0

    @property
    def is_leaf(self) -> bool:
        return self.feature_index is None

    def walk(self) -> Iterator["TreeNode"]:
        """Nodes in pre-order (node, left subtree, right subtree)."""
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            if not node.is_leaf:
                stack.append(node.right)
                stack.append(node.left)

    def to_dict(self) -> Dict[str, Any]:
        payload: Dict[str, Any] = {
            "node_id": self.node_id,
            "n_samples": self.n_samples,
            "impurity": self.impurity,
            "value": self.value,
        }
        if not self.is_leaf:
            payload.update(
                feature_index=self.feature_index,
                threshold=self.threshold,
                left=self.left.to_dict(),
                right=self.right.to_dict(),
            )
        return payload

    @classmethod
    def from_dict(cls, payload: Dict[str, Any]) -> "TreeNode":
        node = cls(
            n_samples=int(payload["n_samples"]),
            impurity=float(payload["impurity"]),
            value=float(payload["value"]),
            node_id=int(payload.get("node_id", 0)),
        )
        if "feature_index" in payload:
            node.feature_index = int(payload["feature_index"])
            node.threshold = float(payload["threshold"])
            node.left = cls.from_dict(payload["left"])
            node.right = cls.from_dict(payload["right"])
        return node


def check_features(x, n_features: int) -> np.ndarray:
    """Float matrix with ``n_features`` columns.

    Raises:
        ValueError: On a feature-count mismatch
    """
    x = np.asarray(getattr(x, "values", x), dtype=np.float64)
    if x.ndim != 2 or x.shape[1] != n_features:
        raise ValueError(f"Model expects {n_features} features, got shape {x.shape}")
    return x


@dataclass
class Tree:
    """A fitted CART tree."""

    root: TreeNode
    kind: TreeKind
    n_features: int
    max_depth: Optional[int] = None
    feature_names: List[str] = field(default_factory=list)

    def nodes(self) -> List[TreeNode]:
        return list(self.root.walk())

    @property
    def n_leaves(self) -> int:
        return sum(1 for node in self.root.walk() if node.is_leaf)

    @property
    def depth(self) -> int:
        deepest = 0
        stack = [(self.root, 0)]
        while stack:
            node, depth = stack.pop()
            deepest = max(deepest, depth)
            if not node.is_leaf:
                stack.extend([(node.left, depth + 1), (node.right, depth + 1)])
        return deepest

    def predict(self, x) -> np.ndarray:
        """Leaf value reached by each row."""
        x = check_features(x, self.n_features)
        out = np.empty(x.shape[0])
        stack = [(self.root, np.arange(x.shape[0]))]
        while stack:
            node, rows = stack.pop()
            if rows.size == 0:
                continue
            if node.is_leaf:
                out[rows] = node.value
                continue
            goes_left = x[rows, node.feature_index] <= node.threshold
            stack.append((node.left, rows[goes_left]))
            stack.append((node.right, rows[~goes_left]))
        return out

    def apply(self, x) -> np.ndarray:
        """Id of the leaf reached by each row."""
        x = check_features(x, self.n_features)
        out = np.empty(x.shape[0], dtype=np.int64)
        for r, row in enumerate(x):
            node = self.root
            while not node.is_leaf:
                node = node.left if row[node.feature_index] <= node.threshold else node.right
            out[r] = node.node_id
        return out

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind.value,
            "n_features": self.n_features,
            "max_depth": self.max_depth,
            "feature_names": list(self.feature_names),
            "root": self.root.to_dict(),
        }

    @classmethod
    def from_dict(cls, payload: Dict[str, Any]) -> "Tree":
        return cls(
            root=TreeNode.from_dict(payload["root"]),
            kind=TreeKind(payload["kind"]),
            n_features=int(payload["n_features"]),
            max_depth=payload.get("max_depth"),
            feature_names=list(payload.get("feature_names", [])),
        )


def tree_predict(model, x) -> np.ndarray:
    """Predictions of a Tree or GbtEnsemble."""
    return model.predict(x)
