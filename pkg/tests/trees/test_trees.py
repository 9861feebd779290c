"""Tests for CART, boosting, importance and DOT export."""

import re

import numpy as np
import pytest

from mimiclearn.models import TreeConfig, TreeKind
from mimiclearn.trees import (
    GbtEnsemble,
    Tree,
    TreeNode,
    best_split,
    cart_fit,
    export_dot,
    feature_importance,
    gbt_fit,
    most_important_stage,
    node_impurity,
)

EDGE = re.compile(r"(\d+) -> (\d+) \[label=\"?(true|false)\"?\]")
SPLIT = re.compile(r"(\d+) \[label=\"?X\[(\d+)\] ≤ (-?[\d.]+)")
LEAF = re.compile(r"(\d+) \[label=\"?value = (-?[\d.e+-]+)")


def _leaf(value, n=1):
    return TreeNode(n_samples=n, impurity=0.0, value=value)


def _stump(feature, threshold, n_features, left=0.0, right=1.0):
    root = TreeNode(
        n_samples=4,
        impurity=0.25,
        value=0.5,
        feature_index=feature,
        threshold=threshold,
        left=TreeNode(n_samples=2, impurity=0.0, value=left, node_id=1),
        right=TreeNode(n_samples=2, impurity=0.0, value=right, node_id=2),
    )
    return Tree(root=root, kind=TreeKind.REGRESSOR_MSE, n_features=n_features)


def _follow_dot(source, row):
    """Route ``row`` through the tree described by a DOT document."""
    splits = {int(i): (int(j), float(t)) for i, j, t in SPLIT.findall(source)}
    leaves = {int(i): float(v) for i, v in LEAF.findall(source)}
    children = {}
    for parent, child, label in EDGE.findall(source):
        children[(int(parent), label)] = int(child)

    node = 0
    while node in splits:
        feature, threshold = splits[node]
        node = children[(node, "true" if row[feature] <= threshold else "false")]
    return leaves[node]


class TestCart:
    """Test single-tree growth."""

    def test_midpoint_split(self):
        """Test that X=[[0],[1]], y=[0,1] splits at 0.5 into two pure leaves."""
        tree = cart_fit(np.array([[0.0], [1.0]]), np.array([0.0, 1.0]), TreeConfig(max_depth=None))

        assert tree.root.feature_index == 0
        assert tree.root.threshold == pytest.approx(0.5)
        assert tree.n_leaves == 2
        np.testing.assert_array_equal(tree.predict(np.array([[0.0], [1.0]])), [0.0, 1.0])

    def test_xor_grows_through_zero_gain_split(self):
        """Test that XOR needs a zero-gain root split and ends with 4 pure leaves."""
        x = np.array([[0.0, 0.0], [0.0, 1.0], [1.0, 0.0], [1.0, 1.0]])
        y = np.array([0.0, 1.0, 1.0, 0.0])
        tree = cart_fit(x, y, TreeConfig(max_depth=None))

        assert tree.n_leaves == 4
        assert all(node.impurity == 0.0 for node in tree.nodes() if node.is_leaf)
        np.testing.assert_array_equal(tree.predict(x), y)

    def test_constant_target_is_single_leaf(self):
        """Test that a constant regression target never splits."""
        x = np.random.default_rng(0).normal(size=(20, 3))
        tree = cart_fit(x, np.full(20, 2.5), kind=TreeKind.REGRESSOR_MSE)

        assert tree.root.is_leaf
        np.testing.assert_allclose(tree.predict(x), 2.5)

    def test_constant_features_give_leaf(self):
        """Test that best_split returns None when no feature varies."""
        x = np.ones((5, 2))
        assert best_split(x, np.array([0.0, 1.0, 0.0, 1.0, 1.0]), TreeKind.CLASSIFIER_GINI) is None

    def test_max_depth_respected(self):
        """Test that growth stops at max_depth."""
        rng = np.random.default_rng(1)
        x = rng.normal(size=(80, 4))
        y = (rng.random(80) < 0.5).astype(float)
        tree = cart_fit(x, y, TreeConfig(max_depth=2))
        assert tree.depth <= 2
        assert tree.n_leaves <= 4

    def test_impurities(self):
        """Test Gini and MSE node impurity."""
        assert node_impurity(np.array([0.0, 1.0]), TreeKind.CLASSIFIER_GINI) == pytest.approx(0.5)
        assert node_impurity(np.array([1.0, 1.0]), TreeKind.CLASSIFIER_GINI) == 0.0
        assert node_impurity(np.array([0.0, 2.0]), TreeKind.REGRESSOR_MSE) == pytest.approx(1.0)

    def test_shifted_column_shifts_thresholds(self):
        """Test that adding a constant to a column only moves its thresholds."""
        rng = np.random.default_rng(4)
        x = np.round(rng.normal(size=(40, 2)), 2)
        y = (x[:, 0] + x[:, 1] > 0).astype(float)
        shifted = x.copy()
        shifted[:, 1] += 8.0

        original = cart_fit(x, y, TreeConfig(max_depth=3))
        moved = cart_fit(shifted, y, TreeConfig(max_depth=3))
        for a, b in zip(original.nodes(), moved.nodes()):
            assert a.feature_index == b.feature_index
            if a.feature_index == 1:
                assert b.threshold == pytest.approx(a.threshold + 8.0)
            elif a.feature_index == 0:
                assert b.threshold == a.threshold

    def test_single_leaf_predict(self):
        """Test that a leaf-only tree predicts its value everywhere."""
        tree = Tree(root=_leaf(0.7), kind=TreeKind.REGRESSOR_MSE, n_features=2)
        np.testing.assert_allclose(tree.predict(np.zeros((3, 2))), 0.7)

    def test_rejects_non_binary_classifier_targets(self):
        """Test that classifier targets other than 0/1 are rejected."""
        with pytest.raises(ValueError, match="0 or 1"):
            cart_fit(np.zeros((2, 1)), np.array([0.0, 0.5]))

    def test_rejects_nan(self):
        """Test that missing values are rejected."""
        with pytest.raises(ValueError, match="non-finite"):
            cart_fit(np.array([[np.nan], [1.0]]), np.array([0.0, 1.0]))

    def test_seeded_tie_break_is_deterministic(self):
        """Test that random tie-breaking with a fixed seed repeats."""
        x = np.array([[0.0, 0.0], [0.0, 0.0], [1.0, 1.0], [1.0, 1.0]])
        y = np.array([0.0, 0.0, 1.0, 1.0])
        cfg = TreeConfig(max_depth=1, random_tie_break=True, seed=3)

        first = cart_fit(x, y, cfg)
        second = cart_fit(x, y, cfg)
        assert first.root.feature_index == second.root.feature_index


class TestGbt:
    """Test gradient boosting."""

    def test_constant_target(self):
        """Test that a constant target is predicted exactly."""
        x = np.random.default_rng(0).normal(size=(30, 2))
        model = gbt_fit(x, np.full(30, 0.3), TreeConfig(n_stages=5))
        np.testing.assert_allclose(model.predict(x), 0.3)

    def test_single_full_step(self):
        """Test M=1, shrinkage 1 on y=[0,0,1,1]: base 0.5, split at 1.5, exact fit."""
        x = np.arange(4.0).reshape(-1, 1)
        y = np.array([0.0, 0.0, 1.0, 1.0])
        model = gbt_fit(x, y, TreeConfig(n_stages=1, shrinkage=1.0))

        assert model.base_score == pytest.approx(0.5)
        assert model.stages[0].root.threshold == pytest.approx(1.5)
        np.testing.assert_allclose(model.predict(x), y)

    def test_history_non_increasing(self):
        """Test that the training MSE never rises across stages."""
        rng = np.random.default_rng(2)
        x = rng.normal(size=(120, 4))
        y = (x[:, 0] + 0.3 * rng.normal(size=120) > 0).astype(float)
        model = gbt_fit(x, y, TreeConfig(n_stages=30))

        assert len(model.history) == 31
        assert np.all(np.diff(model.history) <= 1e-12)

    def test_stage_size_limits(self):
        """Test that every stage has depth <= 3 and at most 8 leaves."""
        rng = np.random.default_rng(3)
        x = rng.normal(size=(200, 5))
        y = rng.random(200)
        model = gbt_fit(x, y, TreeConfig(n_stages=10))

        for stage in model.stages:
            assert stage.depth <= 3
            assert stage.n_leaves <= 8

    def test_shrunken_sum(self):
        """Test F = base + shrinkage * sum of stages on a hand-built ensemble."""
        stage = Tree(root=_leaf(1.0), kind=TreeKind.REGRESSOR_MSE, n_features=1)
        model = GbtEnsemble(base_score=0.3, stages=[stage], shrinkage=0.1, n_features=1)

        np.testing.assert_allclose(model.predict(np.zeros((2, 1))), 0.4)
        staged = model.staged_predict(np.zeros((1, 1)))
        assert [float(s[0]) for s in staged] == pytest.approx([0.3, 0.4])

    def test_feature_count_checked(self):
        """Test that predicting with the wrong width fails."""
        model = gbt_fit(np.zeros((4, 2)), np.zeros(4), TreeConfig(n_stages=1))
        with pytest.raises(ValueError):
            model.predict(np.zeros((2, 3)))


class TestImportance:
    """Test impurity-decrease importance."""

    def test_single_split_feature(self):
        """Test that a tree splitting only on feature 3 gives it importance 1."""
        importance = feature_importance(_stump(3, 0.5, n_features=5))
        np.testing.assert_allclose(importance, [0.0, 0.0, 0.0, 1.0, 0.0])

    def test_sums_to_one(self):
        """Test that a fitted ensemble's importance sums to 1."""
        rng = np.random.default_rng(5)
        x = rng.normal(size=(150, 4))
        y = (x[:, 1] - x[:, 2] > 0).astype(float)
        importance = feature_importance(gbt_fit(x, y, TreeConfig(n_stages=20)))

        assert importance.sum() == pytest.approx(1.0)
        assert np.all(importance >= 0)
        assert set(np.argsort(importance)[-2:]) == {1, 2}

    def test_recovers_single_informative_feature(self):
        """Test that the one informative feature is the argmax in at least 9 of 10 seeds."""
        found = 0
        for seed in range(10):
            rng = np.random.default_rng(seed)
            x = rng.normal(size=(200, 6))
            noisy = x[:, 4] + rng.normal(scale=0.5, size=200)
            y = (noisy > 0).astype(float)
            importance = feature_importance(gbt_fit(x, y, TreeConfig(n_stages=20)))
            found += int(np.argmax(importance) == 4)
        assert found >= 9

    def test_no_splits_gives_zeros(self):
        """Test that a model without splits has all-zero importance."""
        tree = Tree(root=_leaf(0.5), kind=TreeKind.REGRESSOR_MSE, n_features=3)
        np.testing.assert_array_equal(feature_importance(tree), np.zeros(3))
        ensemble = GbtEnsemble(base_score=0.1, stages=[tree], shrinkage=0.1, n_features=3)
        np.testing.assert_array_equal(feature_importance(ensemble), np.zeros(3))

    def test_most_important_stage(self):
        """Test that the stage with the only split is picked."""
        flat = Tree(root=_leaf(0.0, n=4), kind=TreeKind.REGRESSOR_MSE, n_features=2)
        ensemble = GbtEnsemble(
            base_score=0.0, stages=[flat, _stump(1, 0.0, n_features=2)], shrinkage=0.1, n_features=2
        )
        assert most_important_stage(ensemble) == 1

    def test_most_important_stage_empty(self):
        """Test that an ensemble without stages is rejected."""
        ensemble = GbtEnsemble(base_score=0.0, stages=[], shrinkage=0.1, n_features=2)
        with pytest.raises(ValueError):
            most_important_stage(ensemble)


class TestExportDot:
    """Test DOT export."""

    def test_leaf_only(self):
        """Test that a single-leaf tree exports one node and no edges."""
        source = export_dot(Tree(root=_leaf(0.25, n=7), kind=TreeKind.REGRESSOR_MSE, n_features=1))

        assert len(LEAF.findall(source)) == 1
        assert "->" not in source
        assert "samples = 7" in source

    def test_depth_one(self):
        """Test 3 nodes, 2 edges and a 4-decimal threshold for a stump."""
        tree = cart_fit(np.array([[0.0], [1.0]]), np.array([0.0, 1.0]))
        source = export_dot(tree)

        assert len(SPLIT.findall(source)) == 1
        assert len(LEAF.findall(source)) == 2
        assert sorted(label for _, _, label in EDGE.findall(source)) == ["false", "true"]
        assert "X[0] ≤ 0.5000" in source

    def test_feature_names_used(self):
        """Test that supplied names replace X[i]."""
        tree = cart_fit(np.array([[0.0], [1.0]]), np.array([0.0, 1.0]), feature_names=["age"])
        assert "age ≤ 0.5000" in export_dot(tree)

    def test_routing_matches_predict(self):
        """Test that following the exported thresholds reproduces predict."""
        rng = np.random.default_rng(7)
        x = np.round(rng.normal(size=(60, 3)), 1)
        y = (x[:, 0] * x[:, 2] > 0).astype(float)
        tree = cart_fit(x, y, TreeConfig(max_depth=4))
        source = export_dot(tree)

        probe = np.round(rng.normal(size=(40, 3)), 1) + 0.01
        expected = tree.predict(probe)
        for row, value in zip(probe, expected):
            assert _follow_dot(source, row) == pytest.approx(value, abs=1e-9)
