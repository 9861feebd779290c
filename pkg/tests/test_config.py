"""Tests for configuration loading and layering."""

import json

import pytest

from mimiclearn.config import ConfigLoader
from mimiclearn.models import BenchConfig, FeatureView, TrainRunConfig


class TestConfigLoader:
    """Test ConfigLoader."""

    def test_defaults_without_file(self):
        """Test that no file and no flags give the model defaults."""
        cfg = ConfigLoader.resolve(BenchConfig)
        assert cfg.trials == 5
        assert cfg.folds == 5
        assert cfg.tree.n_stages == 100

    def test_yaml_and_json(self, tmp_path):
        """Test that both file formats load."""
        yaml_path = tmp_path / "bench.yaml"
        yaml_path.write_text("trials: 2\nviews: [all, temporal_only]\n")
        json_path = tmp_path / "bench.json"
        json_path.write_text(json.dumps({"trials": 3}))

        assert ConfigLoader.resolve(BenchConfig, yaml_path).views == [
            FeatureView.ALL,
            FeatureView.TEMPORAL_ONLY,
        ]
        assert ConfigLoader.resolve(BenchConfig, json_path).trials == 3

    def test_flags_override_file(self, tmp_path):
        """Test that given flags win and None flags are ignored."""
        path = tmp_path / "bench.yaml"
        path.write_text("trials: 2\nfolds: 4\n")
        cfg = ConfigLoader.resolve(BenchConfig, path, {"trials": 7, "folds": None})
        assert cfg.trials == 7
        assert cfg.folds == 4

    def test_nested_override_merges(self, tmp_path):
        """Test that a section flag keeps the rest of the file's section."""
        path = tmp_path / "train.yaml"
        path.write_text("train:\n  epochs: 9\n  hidden_sizes: [4]\n")

        cfg = ConfigLoader.resolve(TrainRunConfig, path, {"train": {"epochs": 2, "learning_rate": None}})
        assert cfg.train.epochs == 2
        assert cfg.train.hidden_sizes == [4]
        untouched = ConfigLoader.resolve(TrainRunConfig, path, {"train": {"epochs": None}})
        assert untouched.train.epochs == 9

    def test_error_names_field(self, tmp_path):
        """Test that validation errors name the nested field."""
        path = tmp_path / "train.yaml"
        path.write_text("train:\n  epochs: 0\n")
        with pytest.raises(ValueError, match=r"^train\.epochs: "):
            ConfigLoader.resolve(TrainRunConfig, path)

    def test_unknown_key(self):
        """Test that unknown keys are rejected."""
        with pytest.raises(ValueError, match="^trails: "):
            ConfigLoader.resolve(BenchConfig, overrides={"trails": 3})

    def test_non_mapping_file(self, tmp_path):
        """Test that a list document is rejected."""
        path = tmp_path / "list.yaml"
        path.write_text("- 1\n- 2\n")
        with pytest.raises(ValueError, match="mapping"):
            ConfigLoader.load(path)

    def test_missing_file(self, tmp_path):
        """Test that a missing file raises FileNotFoundError."""
        with pytest.raises(FileNotFoundError):
            ConfigLoader.load(tmp_path / "missing.yaml")

    def test_empty_file(self, tmp_path):
        """Test that an empty document means defaults."""
        path = tmp_path / "empty.yaml"
        path.write_text("")
        assert ConfigLoader.resolve(BenchConfig, path) == BenchConfig()
