"""DOT export of fitted trees."""

from typing import Optional, Sequence

import graphviz

from .base import Tree, TreeNode


def _feature_name(index: int, names: Sequence[str]) -> str:
    return names[index] if index < len(names) else f"X[{index}]"


def node_label(node: TreeNode, names: Sequence[str]) -> str:
    if node.is_leaf:
        return f"value = {node.value!r}\\nsamples = {node.n_samples}"
    return (
        f"{_feature_name(node.feature_index, names)} ≤ {node.threshold:.4f}"
        f"\\nsamples = {node.n_samples}\\nimpurity = {node.impurity:.4f}"
    )


def tree_to_digraph(tree: Tree, feature_names: Optional[Sequence[str]] = None) -> graphviz.Digraph:
    """Build a graphviz digraph; node ids are the tree's pre-order ids."""
    names = list(feature_names) if feature_names is not None else list(tree.feature_names)
    dot = graphviz.Digraph(name="tree", comment="Decision Tree")
    dot.attr("node", shape="box", fontname="helvetica")

    for node in tree.root.walk():
        dot.node(str(node.node_id), node_label(node, names))
        if not node.is_leaf:
            dot.edge(str(node.node_id), str(node.left.node_id), label="true")
            dot.edge(str(node.node_id), str(node.right.node_id), label="false")
    return dot


def export_dot(tree: Tree, feature_names: Optional[Sequence[str]] = None) -> str:
    """DOT source of ``tree``.

    Split nodes read ``name ≤ threshold`` (4 decimals) with sample count and
    impurity; leaves show their value and sample count. The left edge of a
    split is labeled ``true``.
    """
    return tree_to_digraph(tree, feature_names).source
