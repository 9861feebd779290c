"""CART trees, boosted ensembles, importance and DOT export."""

from .base import Tree, TreeNode, tree_predict
from .cart import best_split, cart_fit, node_impurity
from .export import export_dot, tree_to_digraph
from .gbt import GbtEnsemble, gbt_fit
from .importance import feature_importance, most_important_stage, tree_contributions

__all__ = [
    "Tree",
    "TreeNode",
    "tree_predict",
    "best_split",
    "cart_fit",
    "node_impurity",
    "export_dot",
    "tree_to_digraph",
    "GbtEnsemble",
    "gbt_fit",
    "feature_importance",
    "most_important_stage",
    "tree_contributions",
]
